#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "pentadrive/machine.hpp"
#include "pentadrive/vsi.hpp"

namespace pentadrive {

enum class Integrator { RK4 };

struct PlantConfig {
  int substeps_per_Ts = 10;
  Integrator integrator = Integrator::RK4;
  double Ts = 35e-6;

  void validate() const;
};

/// Time derivatives of (i_s_alpha, i_s_beta, i_s_x, i_s_y, i_r_alpha, i_r_beta).
using CurrentRates = std::array<double, 6>;

/// Stationary-frame induction machine model. The rotor is short-circuited and
/// turns at state.omega_r; the x-y subspace is a pure R-Lls circuit.
CurrentRates derivatives(const DriveState& state, const AlphaBeta& v_ab, const AlphaBeta& v_xy,
                         const MachineParams& params);

/// Inverter states held over one control period, as fractions of Ts.
struct PeriodPlan {
  struct Segment {
    Legs legs{};
    double fraction = 1.0;
  };
  std::array<Segment, 2> segments{};
  int count = 1;

  static PeriodPlan single(const Legs& legs);
  /// Large-then-Medium waveform, or one zero-state segment for the null vector.
  static PeriodPlan virtual_vector(const VirtualVector& vvv, const Legs& null_legs);
};

/// Constant phase-a voltage over [t, t + dt).
struct VoltageSample {
  double t = 0.0;
  double dt = 0.0;
  double v_a = 0.0;
};

struct PeriodResult {
  DriveState state;
  std::vector<VoltageSample> samples;
};

struct NumericalBlowUp : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Integrates one control period with RK4 at substep resolution. A two-segment
/// plan splits the substeps round(fL * N) / remainder so the segment boundary
/// falls exactly on a substep edge. Advances t and theta_a (at omega_e).
/// Throws NumericalBlowUp if the state stops being finite.
PeriodResult advance_control_period(const DriveState& state, const PeriodPlan& plan,
                                    const PlantConfig& config, const MachineParams& params,
                                    double omega_e);

/// One RK4 step of length h with constant inputs.
DriveState rk4_step(const DriveState& state, const AlphaBeta& v_ab, const AlphaBeta& v_xy,
                    const MachineParams& params, double h);

/// Magnetic energy stored in the machine inductances (J).
double stored_energy(const DriveState& state, const MachineParams& params);

}  // namespace pentadrive
