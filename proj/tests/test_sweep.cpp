#include <doctest.h>

#include <set>
#include <sstream>
#include <stdexcept>

#include "pentadrive/sweep.hpp"

using namespace pentadrive;

TEST_SUITE("sweep") {

TEST_CASE("zero reference settles on zero vectors") {
  const MachineParams p;
  const PlantConfig plant;
  const auto cfg = make_controller_config("sv-zl", 0.0, 0.0, plant.Ts);
  const auto r = run_single({50.0, 0.0, 0.03}, cfg, p, plant).report;
  CHECK(r.PZ > 99.0);
  CHECK(r.E_ab < 1e-6);
  CHECK(r.feasible);
}

TEST_CASE("mid-range operating point uses implicit modulation") {
  const MachineParams p;
  const PlantConfig plant;
  const auto cfg = make_controller_config("sv-zl", 0.0, 0.0, plant.Ts);
  const auto r = run_single({50.0, 0.6, 0.03}, cfg, p, plant).report;
  CHECK(r.PZ > 0.0);
  CHECK(r.PZ < 100.0);
  CHECK(r.E_ab < 0.1);
  CHECK(r.feasible);
  REQUIRE(r.THD_V);
  CHECK(r.k2 - r.k1 == 5713);  // k1 = ceil(0.1 / Ts), k2 = floor(0.3 / Ts)
}

TEST_CASE("runs are bitwise reproducible") {
  const MachineParams p;
  const PlantConfig plant;
  RunOptions opt;
  opt.keep_trace = true;
  const auto cfg = make_controller_config("vvv", 0.0, 0.0, plant.Ts);
  const auto a = run_single({40.0, 0.8, 0.03}, cfg, p, plant, opt);
  const auto b = run_single({40.0, 0.8, 0.03}, cfg, p, plant, opt);
  CHECK(metrics_csv_row(a.report) == metrics_csv_row(b.report));
  std::ostringstream ta, tb;
  write_trace_csv(ta, a.trace);
  write_trace_csv(tb, b.trace);
  CHECK(ta.str() == tb.str());
}

TEST_CASE("an unreachable reference is infeasible") {
  const MachineParams p;
  const PlantConfig plant;
  const auto cfg = make_controller_config("vvv", 0.0, 0.0, plant.Ts);
  const auto r = run_single({50.0, 3.0, 0.03}, cfg, p, plant).report;
  CHECK_FALSE(r.feasible);
  CHECK_FALSE(r.note.empty());
}

TEST_CASE("grid cardinality and order") {
  SweepSpec spec;
  spec.fe_list = {20, 30, 40, 50};
  spec.is_grid.min = 0.1;
  spec.is_grid.max = 1.0;
  spec.is_grid.steps = 20;
  spec.variants = {make_controller_config("sv-zl", 0, 0, 35e-6),
                   make_controller_config("vvv", 0, 0, 35e-6),
                   make_controller_config("sv-zw", 0.72, 0, 35e-6)};
  spec.run.transient_periods = 0;
  spec.run.window_periods = 1;
  const auto r = run_sweep(spec, MachineParams{}, PlantConfig{});
  REQUIRE(r.rows.size() == 240);
  CHECK(r.rows.front().variant == "sv-zl");
  CHECK(r.rows.back().variant == "sv-zw");
  CHECK(r.rows[19].op.Is_star == doctest::Approx(1.0));
  CHECK(r.rows[20].op.fe == 30.0);
  CHECK(r.boundaries.size() == 12);
}

TEST_CASE("a one-point grid is a single run") {
  SweepSpec spec;
  spec.fe_list = {30};
  spec.is_grid.values = {0.7};
  spec.variants = {make_controller_config("sv-zw", 0.72, 0, 35e-6)};
  const auto r = run_sweep(spec, MachineParams{}, PlantConfig{});
  REQUIRE(r.rows.size() == 1);
  const auto direct = run_single({30, 0.7, 0.03}, spec.variants[0], MachineParams{}, PlantConfig{});
  CHECK(metrics_csv_row(r.rows[0]) == metrics_csv_row(direct.report));
}

TEST_CASE("infeasible rows are recorded and the sweep continues") {
  SweepSpec spec;
  spec.fe_list = {50};
  spec.is_grid.values = {0.5, 5.0};
  spec.variants = {make_controller_config("sv-zl", 0, 0, 35e-6)};
  const auto r = run_sweep(spec, MachineParams{}, PlantConfig{});
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].feasible);
  CHECK_FALSE(r.rows[1].feasible);
  REQUIRE(r.boundaries[0].first_infeasible_Is);
  CHECK(*r.boundaries[0].first_infeasible_Is == 5.0);
}

TEST_CASE("sweep grid validation") {
  SweepSpec spec;
  spec.variants = SweepSpec::default_variants(35e-6);
  CHECK_NOTHROW(spec.validate());
  spec.fe_list.clear();
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = {};
  spec.variants = SweepSpec::default_variants(35e-6);
  spec.is_grid.values = {1.0, 0.5};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("trace file naming") {
  CHECK(trace_file_name("vvv", 50, 1.0) == "trace_vvv_50_1.csv");
}

}
