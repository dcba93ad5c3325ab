#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

namespace pentadrive {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Electrical and mechanical constants of the five-phase induction machine.
/// Defaults are the laboratory machine (resistances in ohm, inductances in H).
struct MachineParams {
  double Rs = 12.85;
  double Rr = 4.80;
  double Lls = 79.93e-3;
  double Llr = 79.93e-3;
  double LM = 681.7e-3;
  double Jm = 0.02;  // carried for completeness; no mechanical model
  int P = 3;
  double Vdc = 300.0;

  double Ls() const { return Lls + LM; }
  double Lr() const { return Llr + LM; }
  double c1() const { return Ls() * Lr() - LM * LM; }
  double c2() const { return Lr() / c1(); }
  double c3() const { return 1.0 / Lls; }
  double c4() const { return LM / c1(); }
  double a2() const { return -Rs * c2(); }
  double a3() const { return -Rs * c3(); }
  /// Speed-dependent coupling term, omega_r in electrical rad/s.
  double a4(double omega_r) const { return -LM * c4() * omega_r; }

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

/// Parses a plain key = value machine file (keys Rs, Rr, Lls, Llr, LM, Jm, P, Vdc).
/// Unknown keys and malformed values throw std::invalid_argument with the line number.
MachineParams parse_machine_params(std::string_view text);

/// Stator currents in the alpha-beta-x-y frame, in that order.
using StatorCurrents = std::array<double, 4>;

struct DriveState {
  double i_s_alpha = 0.0;
  double i_s_beta = 0.0;
  double i_s_x = 0.0;
  double i_s_y = 0.0;
  double i_r_alpha = 0.0;
  double i_r_beta = 0.0;
  double omega_r = 0.0;
  double theta_a = 0.0;
  double t = 0.0;

  StatorCurrents stator() const { return {i_s_alpha, i_s_beta, i_s_x, i_s_y}; }
  bool finite() const;
};

/// Rotation sense of the stator current reference produced by reference().
/// The reference (Is sin wt, Is cos wt) turns clockwise in the alpha-beta plane.
inline constexpr double kReferenceRotation = -1.0;

struct OperatingPoint {
  double fe = 50.0;
  double Is_star = 1.0;
  double slip_fraction = 0.03;

  double omega_e() const { return kTwoPi * fe; }
  /// Signed rotor electrical speed, co-rotating with the reference field.
  double omega_r() const { return kReferenceRotation * omega_e() * (1.0 - slip_fraction); }
  void validate() const;
};

}  // namespace pentadrive
