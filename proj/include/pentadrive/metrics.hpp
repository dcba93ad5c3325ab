#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pentadrive/machine.hpp"
#include "pentadrive/plant.hpp"

namespace pentadrive {

struct MetricsReport {
  std::string variant;
  double lambda_xy = 0.0;
  double lambda_sc = 0.0;
  OperatingPoint op;
  double PZ = 0.0;     // %
  double E_ab = 0.0;   // A rms
  double E_xy = 0.0;   // A rms
  double ASF = 0.0;    // Hz
  std::optional<double> THD_V;  // %, missing when the fundamental vanishes
  long k1 = 0;
  long k2 = 0;
  bool feasible = true;
  std::string note;
};

struct TrackingErrors {
  double E_ab = 0.0;
  double E_xy = 0.0;
};

/// RMS of the alpha-beta and x-y error magnitudes over samples k1..k2 (inclusive).
/// Throws std::invalid_argument when the window is shorter than min_samples
/// (one fundamental period) or out of range.
TrackingErrors tracking_errors(std::span<const std::array<double, 4>> errors, std::size_t k1,
                               std::size_t k2, std::size_t min_samples = 1);

/// Per-switch average commutation frequency: sum(changes) / (10 (t2 - t1)).
/// `changes` must hold every commutation inside the window, intra-period ones included.
double average_switching_frequency(std::span<const int> changes, double t1, double t2);

/// Voltage THD in percent of `samples`, which must be uniformly spaced and span
/// exactly `periods` fundamental periods. Harmonic i sits in bin i*periods;
/// only harmonic bins 2..Nyquist enter the numerator. Returns nullopt when the
/// fundamental amplitude is below v1_floor.
std::optional<double> thd(std::span<const double> samples, std::size_t periods,
                          double v1_floor = 0.0);

/// Bin-averages a piecewise-constant waveform onto `bins` equal bins over [t0, t1).
/// Samples must be contiguous and sorted; uncovered time counts as zero.
std::vector<double> resample_uniform(std::span<const VoltageSample> samples, double t0, double t1,
                                     std::size_t bins);

/// Percentage of periods flagged as applying a zero (or null virtual) vector.
double zero_usage(std::span<const std::uint8_t> zero_flags);

const std::vector<std::string>& metrics_csv_columns();
std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsReport& r);
/// Inverse of metrics_csv_row (fields k1/k2/note are not serialized).
MetricsReport parse_metrics_csv_row(std::string_view line);

}  // namespace pentadrive
