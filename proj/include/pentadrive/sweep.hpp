#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pentadrive/fsmpc.hpp"
#include "pentadrive/machine.hpp"
#include "pentadrive/metrics.hpp"
#include "pentadrive/plant.hpp"

namespace pentadrive {

struct RunOptions {
  int transient_periods = 5;
  int window_periods = 10;
  /// Relative mismatch between the achieved and the commanded fundamental
  /// current above which an operating point counts as unattainable.
  double fundamental_tolerance = 0.05;
  bool keep_trace = false;
  bool keep_decisions = false;
};

struct TraceRow {
  double t = 0.0;
  double i_alpha = 0.0;
  double i_beta = 0.0;
  double i_x = 0.0;
  double i_y = 0.0;
  int applied = 0;
  double v_a = 0.0;  // phase-a voltage at the start of the period
};

struct RunResult {
  MetricsReport report;
  std::vector<TraceRow> trace;
  std::vector<Decision> decisions;
};

/// Closed loop from rest: measure, estimate G, select with delay compensation,
/// apply for Ts. Metrics are taken over `window_periods` fundamental periods
/// after `transient_periods`. Blow-ups and lost tracking mark the report infeasible.
RunResult run_single(const OperatingPoint& op, const ControllerConfig& config,
                     const MachineParams& params, const PlantConfig& plant,
                     const RunOptions& options = {});

/// Overload reusing prebuilt tables (must match params.Vdc).
RunResult run_single(const OperatingPoint& op, const ControllerConfig& config,
                     const MachineParams& params, const PlantConfig& plant,
                     const RunOptions& options, const VsiTables& tables);

/// Steady-state estimate of the largest stator current the large-vector
/// voltage can drive at fe, from the per-phase equivalent circuit.
double estimate_current_limit(double fe, double slip_fraction, const MachineParams& params);

struct IsGrid {
  std::vector<double> values;    // explicit list; overrides the range below
  double min = 0.1;
  std::optional<double> max;     // nullopt: per-fe estimate_current_limit()
  int steps = 25;

  std::vector<double> for_frequency(double fe, double slip_fraction,
                                    const MachineParams& params) const;
};

struct SweepSpec {
  std::vector<double> fe_list = {10, 20, 30, 40, 50};
  IsGrid is_grid;
  std::vector<ControllerConfig> variants;
  double slip_fraction = 0.03;
  RunOptions run;

  /// The four configurations of the comparison: sv-zl (no weights), vvv,
  /// sv-zl with lambda_xy 0.5 and sv-zw with lambda_xy 0.72.
  static std::vector<ControllerConfig> default_variants(double Ts);
  void validate() const;
};

struct AttainabilityBoundary {
  std::string variant;
  double lambda_xy = 0.0;
  double fe = 0.0;
  std::optional<double> first_infeasible_Is;
};

struct SweepResult {
  std::vector<MetricsReport> rows;  // variant-major, then fe, then Is*
  std::vector<AttainabilityBoundary> boundaries;
};

/// Worker count from PENTADRIVE_THREADS, else hardware concurrency.
unsigned sweep_threads();

SweepResult run_sweep(const SweepSpec& spec, const MachineParams& params,
                      const PlantConfig& plant);

/// Largest feasible Is* at fe, by bisection to rel_tol of the bracket.
double attainability_limit(double fe, const ControllerConfig& config, const MachineParams& params,
                           const PlantConfig& plant, const SweepSpec& spec,
                           double rel_tol = 0.005);

void write_metrics_csv(std::ostream& os, const std::vector<MetricsReport>& rows);
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace);
void write_decisions_csv(std::ostream& os, const std::vector<Decision>& decisions);
/// "trace_<variant>_<fe>_<Is>.csv"
std::string trace_file_name(const std::string& variant, double fe, double Is_star);

}  // namespace pentadrive
