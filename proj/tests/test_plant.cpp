#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "pentadrive/plant.hpp"

using namespace pentadrive;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double state_norm(const DriveState& s) {
  return std::sqrt(s.i_s_alpha * s.i_s_alpha + s.i_s_beta * s.i_s_beta + s.i_s_x * s.i_s_x +
                   s.i_s_y * s.i_s_y + s.i_r_alpha * s.i_r_alpha + s.i_r_beta * s.i_r_beta);
}

double state_diff(const DriveState& a, const DriveState& b) {
  DriveState d;
  d.i_s_alpha = a.i_s_alpha - b.i_s_alpha;
  d.i_s_beta = a.i_s_beta - b.i_s_beta;
  d.i_s_x = a.i_s_x - b.i_s_x;
  d.i_s_y = a.i_s_y - b.i_s_y;
  d.i_r_alpha = a.i_r_alpha - b.i_r_alpha;
  d.i_r_beta = a.i_r_beta - b.i_r_beta;
  return state_norm(d);
}

}  // namespace

TEST_SUITE("plant") {

TEST_CASE("equilibrium") {
  const auto d = derivatives(DriveState{}, {}, {}, MachineParams{});
  for (double x : d) CHECK(x == 0.0);
}

TEST_CASE("zero vector from rest only advances the clock") {
  const MachineParams p;
  const PlantConfig cfg;
  const auto r = advance_control_period(DriveState{}, PeriodPlan::single(Legs{}), cfg, p, 100.0);
  CHECK(state_norm(r.state) == 0.0);
  CHECK(r.state.t == doctest::Approx(cfg.Ts));
  CHECK(r.state.theta_a == doctest::Approx(100.0 * cfg.Ts));
  CHECK(r.samples.size() == static_cast<std::size_t>(cfg.substeps_per_Ts));
}

TEST_CASE("x-y step response matches the RL closed form") {
  const MachineParams p;
  const PlantConfig cfg;
  const VsiTables tables(p.Vdc);
  const auto& vv = tables.vv[25];  // a Large vector with a non-zero x-y image
  DriveState s;
  const int periods = 400;
  for (int k = 0; k < periods; ++k) {
    s = advance_control_period(s, PeriodPlan::single(vv.legs), cfg, p, 0.0).state;
  }
  const double t = periods * cfg.Ts;
  const double decay = 1.0 - std::exp(-t * p.Rs / p.Lls);
  CHECK(rel(s.i_s_x, vv.v_xy.alpha / p.Rs * decay) < 1e-8);
  CHECK(rel(s.i_s_y, vv.v_xy.beta / p.Rs * decay) < 1e-8);
}

TEST_CASE("without magnetizing coupling alpha-beta is an R-Ls circuit") {
  MachineParams p;
  p.LM = 1e-15;
  const double v = 50.0;
  DriveState s;
  const double h = 3.5e-6;
  const int n = 2000;
  for (int k = 0; k < n; ++k) s = rk4_step(s, {v, -v}, {}, p, h);
  const double t = n * h;
  const double expected = v / p.Rs * (1.0 - std::exp(-t * p.Rs / p.Ls()));
  CHECK(rel(s.i_s_alpha, expected) < 1e-8);
  CHECK(rel(s.i_s_beta, -expected) < 1e-8);
  CHECK(std::abs(s.i_r_alpha) < 1e-12);
}

TEST_CASE("step halving") {
  const MachineParams p;
  PlantConfig coarse;
  PlantConfig fine;
  fine.substeps_per_Ts = 2 * coarse.substeps_per_Ts;
  const VsiTables tables(p.Vdc);
  DriveState a;
  a.omega_r = -300.0;
  DriveState b = a;
  for (int k = 0; k < 2000; ++k) {
    const auto plan = k % 3 == 0 ? PeriodPlan::single(tables.vv[25].legs)
                                 : PeriodPlan::virtual_vector(tables.vvv[1 + k % 10], Legs{});
    a = advance_control_period(a, plan, coarse, p, 300.0).state;
    b = advance_control_period(b, plan, fine, p, 300.0).state;
  }
  CHECK(state_diff(a, b) / state_norm(b) < 1e-6);
}

TEST_CASE("passive decay of stored energy") {
  const MachineParams p;
  DriveState s;
  s.i_s_alpha = 1.0;
  s.i_s_beta = -0.5;
  s.i_s_x = 0.3;
  s.i_r_alpha = -0.4;
  s.i_r_beta = 0.2;
  double e = stored_energy(s, p);
  CHECK(e > 0.0);
  for (int k = 0; k < 5000; ++k) {
    s = rk4_step(s, {}, {}, p, 3.5e-6);
    const double e_next = stored_energy(s, p);
    CHECK(e_next <= e);
    e = e_next;
  }
}

TEST_CASE("alpha-beta excitation never reaches x-y") {
  const MachineParams p;
  DriveState s;
  s.omega_r = 250.0;
  for (int k = 0; k < 3000; ++k) {
    const double t = k * 3.5e-6;
    s = rk4_step(s, {100.0 * std::cos(300.0 * t), 100.0 * std::sin(300.0 * t)}, {}, p, 3.5e-6);
  }
  CHECK(s.i_s_x == 0.0);
  CHECK(s.i_s_y == 0.0);
  CHECK(std::abs(s.i_s_alpha) > 0.01);
}

TEST_CASE("virtual vector period") {
  const MachineParams p;
  const PlantConfig cfg;
  const VsiTables tables(p.Vdc);
  const auto& v = tables.vvv[3];
  const auto plan = PeriodPlan::virtual_vector(v, Legs{});
  REQUIRE(plan.count == 2);

  // Time-weighted x-y voltage over the period, from the applied segments.
  double mx = 0.0, my = 0.0;
  for (int seg = 0; seg < plan.count; ++seg) {
    const auto c = clarke(phase_voltages(plan.segments[seg].legs, p.Vdc));
    mx += plan.segments[seg].fraction * c.x;
    my += plan.segments[seg].fraction * c.y;
  }
  CHECK(std::hypot(mx, my) < 1e-9);

  const auto r = advance_control_period(DriveState{}, plan, cfg, p, 0.0);
  REQUIRE(r.samples.size() == 10);
  double covered = 0.0;
  for (const auto& smp : r.samples) covered += smp.dt;
  CHECK(covered == doctest::Approx(cfg.Ts).epsilon(1e-14));
  CHECK(r.samples[6].t == doctest::Approx(v.tL * cfg.Ts).epsilon(1e-12));

  // Repeating the same virtual vector drives the x-y current to a zero-mean ripple.
  DriveState s;
  for (int k = 0; k < 4000; ++k) s = advance_control_period(s, plan, cfg, p, 0.0).state;
  double mean_x = 0.0;
  double mean_y = 0.0;
  const int n = 2000;
  DriveState q = s;
  for (int seg = 0; seg < 2; ++seg) {
    const auto c = clarke(phase_voltages(plan.segments[seg].legs, p.Vdc));
    const double h = plan.segments[seg].fraction * cfg.Ts / n;
    for (int i = 0; i < n; ++i) {
      const DriveState next = rk4_step(q, {c.alpha, c.beta}, {c.x, c.y}, p, h);
      mean_x += 0.5 * (q.i_s_x + next.i_s_x) * h;
      mean_y += 0.5 * (q.i_s_y + next.i_s_y) * h;
      q = next;
    }
  }
  CHECK(std::abs(mean_x / cfg.Ts) < 1e-9);
  CHECK(std::abs(mean_y / cfg.Ts) < 1e-9);
}

TEST_CASE("blow-up is reported") {
  MachineParams p;
  DriveState s;
  s.i_s_x = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(advance_control_period(s, PeriodPlan::single(Legs{}), PlantConfig{}, p, 0.0),
                  NumericalBlowUp);
}

}
