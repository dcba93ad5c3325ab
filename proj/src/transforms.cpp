#include "pentadrive/transforms.hpp"

#include <cmath>
#include <stdexcept>

namespace pentadrive {

namespace {

Eigen::Matrix<double, 5, 5> build_clarke() {
  const double th = kTwoPi / 5.0;
  auto gc = [th](int h) { return std::cos(h * th); };
  auto gs = [th](int h) { return std::sin(h * th); };
  Eigen::Matrix<double, 5, 5> m;
  // clang-format off
  m << 1.0, gc(1), gc(2), gc(3), gc(4),
       0.0, gs(1), gs(2), gs(3), gs(4),
       1.0, gc(2), gc(4), gc(1), gc(3),
       0.0, gs(2), gs(4), gs(1), gs(3),
       0.5, 0.5,   0.5,   0.5,   0.5;
  // clang-format on
  return (2.0 / 5.0) * m;
}

}  // namespace

const Eigen::Matrix<double, 5, 5>& clarke_matrix() {
  static const Eigen::Matrix<double, 5, 5> m = build_clarke();
  return m;
}

ClarkeComponents clarke(const Phase5& phase_values) {
  Eigen::Matrix<double, 5, 1> v;
  for (int i = 0; i < 5; ++i) {
    if (!std::isfinite(phase_values[i])) throw std::invalid_argument("clarke: non-finite input");
    v(i) = phase_values[i];
  }
  const Eigen::Matrix<double, 5, 1> r = clarke_matrix() * v;
  return {r(0), r(1), r(2), r(3), r(4)};
}

AlphaBeta park(double d, double q, double theta_a) {
  const double c = std::cos(theta_a);
  const double s = std::sin(theta_a);
  return {c * d + s * q, -s * d + c * q};
}

AlphaBeta inverse_park(double alpha, double beta, double theta_a) {
  const double c = std::cos(theta_a);
  const double s = std::sin(theta_a);
  return {c * alpha - s * beta, s * alpha + c * beta};
}

StatorCurrents reference(const OperatingPoint& op, double t) {
  const double wt = op.omega_e() * t;
  return {op.Is_star * std::sin(wt), op.Is_star * std::cos(wt), 0.0, 0.0};
}

double wrap_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

}  // namespace pentadrive
