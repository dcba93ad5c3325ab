#include "pentadrive/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include "pentadrive/csv.hpp"

namespace pentadrive {

TrackingErrors tracking_errors(std::span<const std::array<double, 4>> errors, std::size_t k1,
                               std::size_t k2, std::size_t min_samples) {
  if (k2 < k1 || k2 >= errors.size()) throw std::invalid_argument("tracking window out of range");
  const std::size_t n = k2 - k1 + 1;
  if (n < std::max<std::size_t>(min_samples, 2)) {
    throw std::invalid_argument("tracking window shorter than one fundamental period");
  }
  double sum_ab = 0.0;
  double sum_xy = 0.0;
  for (std::size_t k = k1; k <= k2; ++k) {
    const auto& e = errors[k];
    sum_ab += e[0] * e[0] + e[1] * e[1];
    sum_xy += e[2] * e[2] + e[3] * e[3];
  }
  return {std::sqrt(sum_ab / n), std::sqrt(sum_xy / n)};
}

double average_switching_frequency(std::span<const int> changes, double t1, double t2) {
  if (!(t2 > t1)) throw std::invalid_argument("switching window has zero length");
  long total = 0;
  for (int c : changes) total += c;
  return static_cast<double>(total) / (10.0 * (t2 - t1));
}

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::complex<double>> real_fft(std::vector<double>& in) {
  const int n = static_cast<int>(in.size());
  std::vector<std::complex<double>> out(in.size() / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

std::optional<double> thd(std::span<const double> samples, std::size_t periods,
                          double v1_floor) {
  if (periods == 0 || samples.size() % periods != 0) {
    throw std::invalid_argument("thd: samples must span an integer number of periods");
  }
  const std::size_t m = samples.size() / periods;
  if (m < 4) throw std::invalid_argument("thd: too few samples per period");

  // Harmonic bins of the full record equal the bins of the period-folded record.
  std::vector<double> folded(m, 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) folded[i % m] += samples[i];
  const auto spec = real_fft(folded);

  const double scale = 2.0 / static_cast<double>(samples.size());
  const double v1 = scale * std::abs(spec[1]);
  if (!(v1 >= v1_floor) || v1 == 0.0) return std::nullopt;
  double harm = 0.0;
  for (std::size_t h = 2; 2 * h < m; ++h) {
    const double vh = scale * std::abs(spec[h]);
    harm += vh * vh;
  }
  return 100.0 * std::sqrt(harm) / v1;
}

std::vector<double> resample_uniform(std::span<const VoltageSample> samples, double t0, double t1,
                                     std::size_t bins) {
  if (!(t1 > t0) || bins == 0) throw std::invalid_argument("resample: empty interval");
  std::vector<double> out(bins, 0.0);
  const double width = (t1 - t0) / static_cast<double>(bins);
  auto it = std::lower_bound(samples.begin(), samples.end(), t0,
                             [](const VoltageSample& s, double t) { return s.t + s.dt <= t; });
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = t0 + b * width;
    const double hi = b + 1 == bins ? t1 : lo + width;
    double acc = 0.0;
    while (it != samples.end() && it->t + it->dt <= lo) ++it;
    for (auto jt = it; jt != samples.end() && jt->t < hi; ++jt) {
      const double overlap = std::min(hi, jt->t + jt->dt) - std::max(lo, jt->t);
      if (overlap > 0.0) acc += overlap * jt->v_a;
    }
    out[b] = acc / (hi - lo);
  }
  return out;
}

double zero_usage(std::span<const std::uint8_t> zero_flags) {
  if (zero_flags.empty()) throw std::invalid_argument("zero_usage: empty window");
  const auto n = std::count_if(zero_flags.begin(), zero_flags.end(), [](std::uint8_t z) { return z != 0; });
  return 100.0 * static_cast<double>(n) / static_cast<double>(zero_flags.size());
}

const std::vector<std::string>& metrics_csv_columns() {
  static const std::vector<std::string> cols = {"variant", "fe",   "Is_star", "lambda_xy",
                                                "lambda_sc", "PZ", "E_ab",    "E_xy",
                                                "ASF",     "THD_V", "feasible"};
  return cols;
}

std::string metrics_csv_header() {
  std::string h;
  for (const auto& c : metrics_csv_columns()) {
    if (!h.empty()) h += ',';
    h += c;
  }
  return h;
}

std::string metrics_csv_row(const MetricsReport& r) {
  std::string s = r.variant;
  for (double v : {r.op.fe, r.op.Is_star, r.lambda_xy, r.lambda_sc, r.PZ, r.E_ab, r.E_xy, r.ASF,
                   r.THD_V.value_or(std::nan(""))}) {
    s += ',';
    s += fmt_double(v);
  }
  s += r.feasible ? ",1" : ",0";
  return s;
}

MetricsReport parse_metrics_csv_row(std::string_view line) {
  const auto f = split_csv_line(line);
  if (f.size() != metrics_csv_columns().size()) {
    throw std::invalid_argument("metrics row has " + std::to_string(f.size()) + " fields");
  }
  MetricsReport r;
  r.variant = f[0];
  r.op.fe = parse_double(f[1]);
  r.op.Is_star = parse_double(f[2]);
  r.lambda_xy = parse_double(f[3]);
  r.lambda_sc = parse_double(f[4]);
  r.PZ = parse_double(f[5]);
  r.E_ab = parse_double(f[6]);
  r.E_xy = parse_double(f[7]);
  r.ASF = parse_double(f[8]);
  const double thd_v = parse_double(f[9]);
  if (!std::isnan(thd_v)) r.THD_V = thd_v;
  r.feasible = f[10] == "1";
  return r;
}

}  // namespace pentadrive
