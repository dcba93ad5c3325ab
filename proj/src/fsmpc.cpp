#include "pentadrive/fsmpc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pentadrive {

void ControllerConfig::validate() const {
  if (!(lambda_xy >= 0.0) || !std::isfinite(lambda_xy)) {
    throw std::invalid_argument("lambda_xy must be >= 0");
  }
  if (!(lambda_sc >= 0.0) || !std::isfinite(lambda_sc)) {
    throw std::invalid_argument("lambda_sc must be >= 0");
  }
  if (!(Ts > 0.0)) throw std::invalid_argument("Ts must be positive");
  if (!(g_filter > 0.0 && g_filter <= 1.0)) throw std::invalid_argument("g_filter must lie in (0, 1]");
  if (variant == Variant::VirtualVector && (lambda_xy != 0.0 || lambda_sc != 0.0)) {
    throw std::invalid_argument("virtual-vector control uses no weighting factors");
  }
}

std::string ControllerConfig::tag() const {
  if (variant == Variant::VirtualVector) return "vvv";
  return avv == AvvSet::ZetaL ? "sv-zl" : "sv-zw";
}

ControllerConfig make_controller_config(std::string_view name, double lambda_xy,
                                        double lambda_sc, double Ts) {
  ControllerConfig c;
  c.Ts = Ts;
  if (name == "vvv") {
    c.variant = Variant::VirtualVector;
    return c;
  }
  if (name == "sv-zl") {
    c.avv = AvvSet::ZetaL;
  } else if (name == "sv-zw") {
    c.avv = AvvSet::ZetaW;
  } else {
    throw std::invalid_argument("unknown variant '" + std::string(name) +
                                "' (expected sv-zl, sv-zw or vvv)");
  }
  c.lambda_xy = lambda_xy;
  c.lambda_sc = lambda_sc;
  return c;
}

Mat4 continuous_A(const MachineParams& p, double omega_r) {
  const double a2 = p.a2();
  const double a3 = p.a3();
  const double a4 = p.a4(omega_r);
  Mat4 A;
  // clang-format off
  A << a2, -a4, 0.0, 0.0,
       a4,  a2, 0.0, 0.0,
       0.0, 0.0, a3, 0.0,
       0.0, 0.0, 0.0, a3;
  // clang-format on
  return A;
}

Vec4 continuous_B_diag(const MachineParams& p) { return {p.c2(), p.c2(), p.c3(), p.c3()}; }

DiscreteModel DiscreteModel::build(const MachineParams& params, double omega_r, double Ts) {
  return {Mat4::Identity() + continuous_A(params, omega_r) * Ts, Ts * continuous_B_diag(params)};
}

Vec4 predict_one_step(const Vec4& i_meas, const Vec4& v_applied, double omega_r,
                      const MachineParams& params, const Vec4& G_hat, double Ts) {
  return DiscreteModel::build(params, omega_r, Ts).step(i_meas, v_applied) + G_hat;
}

Vec4 estimate_disturbance(const Vec4& i_meas, const Vec4& i_model, const Vec4& G_prev,
                          double beta) {
  const Vec4 residual = i_meas - i_model;
  if (beta == 1.0) return residual;
  return (1.0 - beta) * G_prev + beta * residual;
}

double cost(const Vec4& i_ref, const Vec4& i_hat, int delta_S, const ControllerConfig& config) {
  const Vec4 e = i_ref - i_hat;
  const double e_ab = e(0) * e(0) + e(1) * e(1);
  const double e_xy = e(2) * e(2) + e(3) * e(3);
  return e_ab + config.lambda_xy * e_xy + config.lambda_sc * delta_S;
}

PeriodPlan Action::plan() const {
  if (first_fraction >= 1.0) return PeriodPlan::single(first_legs);
  PeriodPlan plan;
  plan.segments[0] = {first_legs, first_fraction};
  plan.segments[1] = {last_legs, 1.0 - first_fraction};
  plan.count = 2;
  return plan;
}

namespace {

Vec4 as_vec4(const AlphaBeta& ab, const AlphaBeta& xy) { return {ab.alpha, ab.beta, xy.alpha, xy.beta}; }

int ones(const Legs& legs) {
  int n = 0;
  for (auto k : legs) n += k;
  return n;
}

int null_changes(const Legs& prev) { return std::min(ones(prev), 5 - ones(prev)); }

}  // namespace

CandidateSet CandidateSet::build(const ControllerConfig& config, const VsiTables& tables) {
  CandidateSet set;
  set.variant = config.variant;
  if (config.variant == Variant::SingleVector) {
    for (int n : avv_members(config.avv, tables.vv)) {
      const auto& vv = tables.vv[n];
      set.ids.push_back(n);
      set.voltages.push_back(as_vec4(vv.v_ab, vv.v_xy));
      set.first_legs.push_back(vv.legs);
      set.last_legs.push_back(vv.legs);
      set.intra.push_back(0);
      set.first_fraction.push_back(1.0);
      set.zero.push_back(vv.corona == Corona::Zero);
    }
  } else {
    for (const auto& v : tables.vvv) {
      set.ids.push_back(v.id);
      set.voltages.push_back(as_vec4(v.v_ab_avg, {0.0, 0.0}));
      set.first_legs.push_back(v.is_null ? Legs{} : v.large->legs);
      set.last_legs.push_back(v.is_null ? Legs{} : v.medium->legs);
      set.intra.push_back(v.is_null ? 0 : switch_changes(v.large->legs, v.medium->legs));
      set.first_fraction.push_back(v.is_null ? 1.0 : v.tL);
      set.zero.push_back(v.is_null);
    }
  }
  return set;
}

Action CandidateSet::action(std::size_t n, const Legs& prev_last_legs) const {
  Action a;
  a.variant = variant;
  a.index = ids[n];
  a.voltage = voltages[n];
  a.zero = zero[n];
  a.intra_changes = intra[n];
  a.first_fraction = first_fraction[n];
  if (variant == Variant::VirtualVector && zero[n]) {
    // Closer of u0 / u31; five legs so there is never a tie.
    const Legs z = ones(prev_last_legs) <= 2 ? Legs{} : Legs{1, 1, 1, 1, 1};
    a.first_legs = a.last_legs = z;
  } else {
    a.first_legs = first_legs[n];
    a.last_legs = last_legs[n];
  }
  a.inter_changes = switch_changes(prev_last_legs, a.first_legs);
  return a;
}

Selection select_action(const Vec4& i_meas, const Action& committed, const Vec4& i_ref_k2,
                        const Vec4& G_hat, const DiscreteModel& model,
                        const ControllerConfig& config, const CandidateSet& candidates) {
  if (candidates.size() == 0) throw std::invalid_argument("empty candidate set");
  const Vec4 i_k1 = model.step(i_meas, committed.voltage) + G_hat;
  // Candidate-independent part of the k+2 prediction.
  const Vec4 drift = model.C * i_k1 + G_hat;
  const bool virtual_vectors = candidates.variant == Variant::VirtualVector;

  std::size_t best = 0;
  double best_cost = 0.0;
  int best_ds = 0;
  for (std::size_t n = 0; n < candidates.size(); ++n) {
    const Vec4 i_k2 = drift + model.B_diag.cwiseProduct(candidates.voltages[n]);
    const int ds = virtual_vectors && candidates.zero[n]
                       ? null_changes(committed.last_legs)
                       : switch_changes(committed.last_legs, candidates.first_legs[n]);
    const double j = cost(i_ref_k2, i_k2, ds, config);
    if (n == 0 || j < best_cost || (j == best_cost && ds < best_ds)) {
      best = n;
      best_cost = j;
      best_ds = ds;
    }
  }
  Selection sel;
  sel.action = candidates.action(best, committed.last_legs);
  sel.cost = best_cost;
  sel.delta_S = best_ds;
  sel.error = i_ref_k2 - (drift + model.B_diag.cwiseProduct(candidates.voltages[best]));
  return sel;
}

FsmpcController::FsmpcController(const ControllerConfig& config, const MachineParams& params,
                                 const VsiTables& tables, double omega_r)
    : config_(config),
      candidates_(CandidateSet::build(config, tables)),
      model_(DiscreteModel::build(params, omega_r, config.Ts)) {
  config_.validate();
  // Start from the all-off state.
  Action start;
  start.variant = config.variant;
  start.index = 0;
  start.zero = true;
  state_.last_applied = start;
}

Decision FsmpcController::step(long k, const Vec4& i_meas, const Vec4& i_ref_k2) {
  if (state_.prev_meas) {
    const Vec4 model = model_.step(*state_.prev_meas, state_.prev_voltage);
    state_.G_hat = estimate_disturbance(i_meas, model, state_.G_hat, config_.g_filter);
  }
  Decision d;
  d.k = k;
  d.selection = select_action(i_meas, state_.last_applied, i_ref_k2, state_.G_hat, model_,
                              config_, candidates_);
  state_.prev_meas = i_meas;
  state_.prev_voltage = state_.last_applied.voltage;
  state_.last_applied = d.selection.action;
  return d;
}

}  // namespace pentadrive
