#include "pentadrive/plant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pentadrive {

void PlantConfig::validate() const {
  if (substeps_per_Ts < 2) throw std::invalid_argument("plant.substeps must be >= 2");
  if (!(Ts > 0.0) || !std::isfinite(Ts)) throw std::invalid_argument("plant.Ts must be positive");
}

CurrentRates derivatives(const DriveState& s, const AlphaBeta& v_ab, const AlphaBeta& v_xy,
                         const MachineParams& p) {
  const double Ls = p.Ls();
  const double Lr = p.Lr();
  const double c1 = p.c1();

  // Rotor flux linkage and the rotor-side "voltage" -Rr ir + wr J psi_r.
  const double psi_a = p.LM * s.i_s_alpha + Lr * s.i_r_alpha;
  const double psi_b = p.LM * s.i_s_beta + Lr * s.i_r_beta;
  const double er_a = -p.Rr * s.i_r_alpha - s.omega_r * psi_b;
  const double er_b = -p.Rr * s.i_r_beta + s.omega_r * psi_a;

  const double es_a = v_ab.alpha - p.Rs * s.i_s_alpha;
  const double es_b = v_ab.beta - p.Rs * s.i_s_beta;

  return {
      (Lr * es_a - p.LM * er_a) / c1,
      (Lr * es_b - p.LM * er_b) / c1,
      (v_xy.alpha - p.Rs * s.i_s_x) / p.Lls,
      (v_xy.beta - p.Rs * s.i_s_y) / p.Lls,
      (-p.LM * es_a + Ls * er_a) / c1,
      (-p.LM * es_b + Ls * er_b) / c1,
  };
}

namespace {

DriveState offset(const DriveState& s, const CurrentRates& d, double h) {
  DriveState r = s;
  r.i_s_alpha += h * d[0];
  r.i_s_beta += h * d[1];
  r.i_s_x += h * d[2];
  r.i_s_y += h * d[3];
  r.i_r_alpha += h * d[4];
  r.i_r_beta += h * d[5];
  return r;
}

}  // namespace

DriveState rk4_step(const DriveState& s, const AlphaBeta& v_ab, const AlphaBeta& v_xy,
                    const MachineParams& p, double h) {
  const auto k1 = derivatives(s, v_ab, v_xy, p);
  const auto k2 = derivatives(offset(s, k1, h / 2), v_ab, v_xy, p);
  const auto k3 = derivatives(offset(s, k2, h / 2), v_ab, v_xy, p);
  const auto k4 = derivatives(offset(s, k3, h), v_ab, v_xy, p);
  CurrentRates d;
  for (int i = 0; i < 6; ++i) d[i] = (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]) / 6.0;
  return offset(s, d, h);
}

PeriodPlan PeriodPlan::single(const Legs& legs) {
  PeriodPlan plan;
  plan.segments[0] = {legs, 1.0};
  plan.count = 1;
  return plan;
}

PeriodPlan PeriodPlan::virtual_vector(const VirtualVector& vvv, const Legs& null_legs) {
  if (vvv.is_null) return single(null_legs);
  PeriodPlan plan;
  plan.segments[0] = {vvv.large->legs, vvv.tL};
  plan.segments[1] = {vvv.medium->legs, vvv.tM};
  plan.count = 2;
  return plan;
}

PeriodResult advance_control_period(const DriveState& state, const PeriodPlan& plan,
                                    const PlantConfig& config, const MachineParams& params,
                                    double omega_e) {
  const int n_total = config.substeps_per_Ts;
  PeriodResult out;
  out.samples.reserve(n_total);
  DriveState s = state;
  double t = state.t;
  int remaining = n_total;
  for (int seg = 0; seg < plan.count; ++seg) {
    const auto& segment = plan.segments[seg];
    int n = seg + 1 == plan.count
                ? remaining
                : static_cast<int>(std::lround(segment.fraction * n_total));
    n = std::clamp(n, 1, remaining - (plan.count - seg - 1));
    remaining -= n;
    const double h = segment.fraction * config.Ts / n;

    const auto phase = phase_voltages(segment.legs, params.Vdc);
    const auto c = clarke(phase);
    const AlphaBeta v_ab{c.alpha, c.beta};
    const AlphaBeta v_xy{c.x, c.y};
    for (int i = 0; i < n; ++i) {
      s = rk4_step(s, v_ab, v_xy, params, h);
      out.samples.push_back({t, h, phase[0]});
      t += h;
    }
  }
  s.t = state.t + config.Ts;
  s.theta_a = wrap_angle(state.theta_a + omega_e * config.Ts);
  if (!s.finite()) {
    throw NumericalBlowUp("plant state became non-finite at t = " + std::to_string(state.t));
  }
  out.state = s;
  return out;
}

double stored_energy(const DriveState& s, const MachineParams& p) {
  const double ab = 0.5 * p.Ls() * (s.i_s_alpha * s.i_s_alpha + s.i_s_beta * s.i_s_beta) +
                    0.5 * p.Lr() * (s.i_r_alpha * s.i_r_alpha + s.i_r_beta * s.i_r_beta) +
                    p.LM * (s.i_s_alpha * s.i_r_alpha + s.i_s_beta * s.i_r_beta);
  const double xy = 0.5 * p.Lls * (s.i_s_x * s.i_s_x + s.i_s_y * s.i_s_y);
  return ab + xy;
}

}  // namespace pentadrive
