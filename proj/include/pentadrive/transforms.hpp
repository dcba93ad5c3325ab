#pragma once

#include <array>

#include <Eigen/Core>

#include "pentadrive/machine.hpp"

namespace pentadrive {

using Phase5 = std::array<double, 5>;

/// alpha, beta, x, y, zero-sequence.
struct ClarkeComponents {
  double alpha = 0.0;
  double beta = 0.0;
  double x = 0.0;
  double y = 0.0;
  double zero = 0.0;
};

/// Amplitude-invariant (2/5 scaled) five-phase Clarke matrix.
const Eigen::Matrix<double, 5, 5>& clarke_matrix();

/// Throws std::invalid_argument on non-finite input.
ClarkeComponents clarke(const Phase5& phase_values);

struct AlphaBeta {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Rotating (d, q) to stationary (alpha, beta) with
/// D = [cos th, sin th; -sin th, cos th].
AlphaBeta park(double d, double q, double theta_a);

/// Inverse of park(): returns (d, q).
AlphaBeta inverse_park(double alpha, double beta, double theta_a);

/// Stator current references at time t: (Is sin wt, Is cos wt, 0, 0).
StatorCurrents reference(const OperatingPoint& op, double t);

/// Wraps an angle into [0, 2 pi).
double wrap_angle(double theta);

}  // namespace pentadrive
