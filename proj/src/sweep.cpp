#include "pentadrive/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <thread>

#include "pentadrive/csv.hpp"
#include "pentadrive/transforms.hpp"

namespace pentadrive {

namespace {

Vec4 to_vec4(const StatorCurrents& s) { return {s[0], s[1], s[2], s[3]}; }

}  // namespace

RunResult run_single(const OperatingPoint& op, const ControllerConfig& config,
                     const MachineParams& params, const PlantConfig& plant,
                     const RunOptions& options) {
  const VsiTables tables(params.Vdc);
  return run_single(op, config, params, plant, options, tables);
}

RunResult run_single(const OperatingPoint& op, const ControllerConfig& config,
                     const MachineParams& params, const PlantConfig& plant,
                     const RunOptions& options, const VsiTables& tables) {
  op.validate();
  config.validate();
  plant.validate();
  if (options.transient_periods < 0 || options.window_periods < 1) {
    throw std::invalid_argument("run window must cover at least one period");
  }
  const double Ts = plant.Ts;
  const double period = 1.0 / op.fe;
  const double t_start = options.transient_periods * period;
  const double t_end = t_start + options.window_periods * period;
  const long k1 = static_cast<long>(std::ceil(t_start / Ts - 1e-9));
  const long k2 = static_cast<long>(std::floor(t_end / Ts + 1e-9));
  const long n_steps = static_cast<long>(std::ceil(t_end / Ts)) + 1;

  RunResult result;
  MetricsReport& report = result.report;
  report.variant = config.tag();
  report.lambda_xy = config.lambda_xy;
  report.lambda_sc = config.lambda_sc;
  report.op = op;
  report.k1 = k1;
  report.k2 = k2;

  DriveState state;
  state.omega_r = op.omega_r();
  FsmpcController controller(config, params, tables, state.omega_r);

  std::vector<std::array<double, 4>> errors;
  errors.reserve(n_steps + 1);
  std::vector<int> changes;
  std::vector<std::uint8_t> zero_flags;
  std::vector<VoltageSample> samples;
  std::complex<double> fundamental = 0.0;

  try {
    for (long k = 0; k < n_steps; ++k) {
      const double t = k * Ts;
      const auto i_meas = state.stator();
      const auto ref = reference(op, t);
      errors.push_back({ref[0] - i_meas[0], ref[1] - i_meas[1], ref[2] - i_meas[2],
                        ref[3] - i_meas[3]});
      if (k >= k1 && k <= k2) {
        fundamental += std::complex<double>(i_meas[0], i_meas[1]) *
                       std::polar(1.0, op.omega_e() * t);
      }

      const Action applied = controller.committed();
      const Decision d = controller.step(k, to_vec4(i_meas), to_vec4(reference(op, t + 2 * Ts)));
      if (options.keep_decisions) result.decisions.push_back(d);

      auto period_result = advance_control_period(state, applied.plan(), plant, params, op.omega_e());
      if (options.keep_trace) {
        result.trace.push_back({t, i_meas[0], i_meas[1], i_meas[2], i_meas[3], applied.index,
                                period_result.samples.front().v_a});
      }
      if (k > k1 && k <= k2) changes.push_back(applied.inter_changes);
      if (k >= k1 && k < k2) {
        changes.push_back(applied.intra_changes);
        zero_flags.push_back(applied.zero);
      }
      if (t + Ts > t_start && t < t_end) {
        samples.insert(samples.end(), period_result.samples.begin(), period_result.samples.end());
      }
      state = period_result.state;
    }
  } catch (const NumericalBlowUp& e) {
    report.feasible = false;
    report.note = e.what();
    report.PZ = report.E_ab = report.E_xy = report.ASF = std::nan("");
    return result;
  }

  const std::size_t per_period = static_cast<std::size_t>(std::lround(period / Ts));
  const auto te = tracking_errors(errors, k1, k2, per_period);
  report.E_ab = te.E_ab;
  report.E_xy = te.E_xy;
  report.ASF = average_switching_frequency(changes, k1 * Ts, k2 * Ts);
  report.PZ = zero_usage(zero_flags);

  const std::size_t bins_per_period = plant.substeps_per_Ts * per_period;
  const auto uniform =
      resample_uniform(samples, t_start, t_end, bins_per_period * options.window_periods);
  report.THD_V = thd(uniform, options.window_periods, 1e-9 * params.Vdc);

  // Reference is j Is e^{-j we t}; its projection on e^{-j we t} is j Is.
  fundamental /= static_cast<double>(k2 - k1 + 1);
  const double mismatch = std::abs(fundamental - std::complex<double>(0.0, op.Is_star));
  if (report.E_ab > op.Is_star && op.Is_star > 0.0) {
    report.feasible = false;
    report.note = "tracking error exceeds reference amplitude";
  } else if (op.Is_star > 0.0 && mismatch > options.fundamental_tolerance * op.Is_star) {
    report.feasible = false;
    report.note = "fundamental current not attained";
  }
  return result;
}

double estimate_current_limit(double fe, double slip_fraction, const MachineParams& p) {
  using cd = std::complex<double>;
  const double w = kTwoPi * fe;
  const cd z_m(0.0, w * p.LM);
  cd z_branch = z_m;
  if (slip_fraction > 0.0) {
    const cd z_r(p.Rr / slip_fraction, w * p.Llr);
    z_branch = z_m * z_r / (z_m + z_r);
  }
  const cd z = cd(p.Rs, w * p.Lls) + z_branch;
  const double v_large = 0.4 * 2.0 * std::cos(std::numbers::pi / 5.0) * p.Vdc;
  return v_large / std::abs(z);
}

std::vector<double> IsGrid::for_frequency(double fe, double slip_fraction,
                                          const MachineParams& params) const {
  if (!values.empty()) return values;
  const double hi = max ? *max : estimate_current_limit(fe, slip_fraction, params);
  std::vector<double> out;
  if (steps == 1) return {min};
  for (int i = 0; i < steps; ++i) out.push_back(min + (hi - min) * i / (steps - 1));
  return out;
}

std::vector<ControllerConfig> SweepSpec::default_variants(double Ts) {
  return {make_controller_config("sv-zl", 0.0, 0.0, Ts), make_controller_config("vvv", 0, 0, Ts),
          make_controller_config("sv-zl", 0.5, 0.0, Ts),
          make_controller_config("sv-zw", 0.72, 0.0, Ts)};
}

void SweepSpec::validate() const {
  if (fe_list.empty()) throw std::invalid_argument("sweep.fe must not be empty");
  for (double fe : fe_list) {
    if (!(fe > 0.0)) throw std::invalid_argument("sweep.fe values must be positive");
  }
  if (variants.empty()) throw std::invalid_argument("sweep.variants must not be empty");
  for (const auto& v : variants) v.validate();
  if (is_grid.values.empty()) {
    if (is_grid.steps < 1) throw std::invalid_argument("sweep.is_steps must be >= 1");
    if (is_grid.min < 0.0) throw std::invalid_argument("sweep.is_min must be >= 0");
    if (is_grid.max && *is_grid.max < is_grid.min) {
      throw std::invalid_argument("sweep.is_max must be >= sweep.is_min");
    }
  } else {
    for (std::size_t i = 0; i < is_grid.values.size(); ++i) {
      if (is_grid.values[i] < 0.0 || (i > 0 && is_grid.values[i] <= is_grid.values[i - 1])) {
        throw std::invalid_argument("sweep.is must be ascending and non-negative");
      }
    }
  }
}

unsigned sweep_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PENTADRIVE_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

SweepResult run_sweep(const SweepSpec& spec, const MachineParams& params,
                      const PlantConfig& plant) {
  spec.validate();
  const VsiTables tables(params.Vdc);

  struct Job {
    std::size_t variant;
    OperatingPoint op;
  };
  std::vector<Job> jobs;
  for (std::size_t v = 0; v < spec.variants.size(); ++v) {
    for (double fe : spec.fe_list) {
      for (double is : spec.is_grid.for_frequency(fe, spec.slip_fraction, params)) {
        jobs.push_back({v, {fe, is, spec.slip_fraction}});
      }
    }
  }

  SweepResult result;
  result.rows.resize(jobs.size());
  RunOptions options = spec.run;
  options.keep_trace = options.keep_decisions = false;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const auto& job = jobs[j];
      const auto& cfg = spec.variants[job.variant];
      try {
        result.rows[j] = run_single(job.op, cfg, params, plant, options, tables).report;
      } catch (const std::exception& e) {
        MetricsReport& r = result.rows[j];
        r.variant = cfg.tag();
        r.lambda_xy = cfg.lambda_xy;
        r.lambda_sc = cfg.lambda_sc;
        r.op = job.op;
        r.PZ = r.E_ab = r.E_xy = r.ASF = std::nan("");
        r.feasible = false;
        r.note = e.what();
      }
    }
  };
  const unsigned n_threads = std::min<std::size_t>(sweep_threads(), jobs.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }

  for (std::size_t v = 0; v < spec.variants.size(); ++v) {
    for (double fe : spec.fe_list) {
      AttainabilityBoundary b{spec.variants[v].tag(), spec.variants[v].lambda_xy, fe, {}};
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (jobs[j].variant == v && jobs[j].op.fe == fe && !result.rows[j].feasible) {
          b.first_infeasible_Is = jobs[j].op.Is_star;
          break;
        }
      }
      result.boundaries.push_back(b);
    }
  }
  return result;
}

double attainability_limit(double fe, const ControllerConfig& config, const MachineParams& params,
                           const PlantConfig& plant, const SweepSpec& spec, double rel_tol) {
  const VsiTables tables(params.Vdc);
  RunOptions options = spec.run;
  options.keep_trace = options.keep_decisions = false;
  auto feasible = [&](double is) {
    return run_single({fe, is, spec.slip_fraction}, config, params, plant, options, tables)
        .report.feasible;
  };
  const double est = estimate_current_limit(fe, spec.slip_fraction, params);
  double lo = 0.5 * est;
  double hi = 1.25 * est;
  while (!feasible(lo)) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-3) return 0.0;
  }
  while (feasible(hi)) {
    lo = hi;
    hi *= 1.5;
  }
  while ((hi - lo) > rel_tol * lo) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

void write_metrics_csv(std::ostream& os, const std::vector<MetricsReport>& rows) {
  os << metrics_csv_header() << '\n';
  for (const auto& r : rows) os << metrics_csv_row(r) << '\n';
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
  os << "t,i_alpha,i_beta,i_x,i_y,applied,v_a\n";
  for (const auto& r : trace) {
    os << fmt_double(r.t) << ',' << fmt_double(r.i_alpha) << ',' << fmt_double(r.i_beta) << ','
       << fmt_double(r.i_x) << ',' << fmt_double(r.i_y) << ',' << r.applied << ','
       << fmt_double(r.v_a) << '\n';
  }
}

void write_decisions_csv(std::ostream& os, const std::vector<Decision>& decisions) {
  os << "k,chosen,cost,delta_S,e_alpha,e_beta,e_x,e_y\n";
  for (const auto& d : decisions) {
    const auto& s = d.selection;
    os << d.k << ',' << s.action.index << ',' << fmt_double(s.cost) << ',' << s.delta_S << ','
       << fmt_double(s.error(0)) << ',' << fmt_double(s.error(1)) << ','
       << fmt_double(s.error(2)) << ',' << fmt_double(s.error(3)) << '\n';
  }
}

std::string trace_file_name(const std::string& variant, double fe, double Is_star) {
  return "trace_" + variant + "_" + fmt_double(fe) + "_" + fmt_double(Is_star) + ".csv";
}

}  // namespace pentadrive
