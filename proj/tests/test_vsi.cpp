#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pentadrive/vsi.hpp"

using namespace pentadrive;

namespace {

std::set<int> corona_set(const std::array<VoltageVector, 32>& t, Corona c) {
  std::set<int> s;
  for (const auto& v : t) {
    if (v.corona == c) s.insert(v.index);
  }
  return s;
}

double norm(const AlphaBeta& v) { return std::hypot(v.alpha, v.beta); }

}  // namespace

TEST_SUITE("vsi") {

TEST_CASE("leg encoding round trip") {
  for (int n = 0; n < 32; ++n) CHECK(index_from_legs(legs_from_index(n)) == n);
  CHECK(legs_from_index(16) == Legs{1, 0, 0, 0, 0});
  CHECK(legs_from_index(1) == Legs{0, 0, 0, 0, 1});
}

TEST_CASE("phase voltages") {
  auto v = phase_voltages(Legs{0, 0, 0, 0, 0}, 300.0);
  for (double x : v) CHECK(x == 0.0);
  v = phase_voltages(Legs{1, 1, 1, 1, 1}, 300.0);
  for (double x : v) CHECK(std::abs(x) < 1e-12);

  // Direct product with T = I - ones/5.
  const Legs u{1, 0, 0, 0, 0};
  v = phase_voltages(u, 300.0);
  for (int i = 0; i < 5; ++i) {
    double ref = 0.0;
    for (int j = 0; j < 5; ++j) ref += ((i == j ? 1.0 : 0.0) - 0.2) * u[j] * 300.0;
    CHECK(v[i] == doctest::Approx(ref));
  }
  CHECK(v[0] == doctest::Approx(240.0));
  CHECK(v[1] == doctest::Approx(-60.0));
}

TEST_CASE("corona classification matches the published lists") {
  const auto t = build_vv_table(300.0);
  CHECK(corona_set(t, Corona::Large) == std::set<int>{25, 24, 28, 12, 14, 6, 7, 3, 19, 17});
  CHECK(corona_set(t, Corona::Medium) == std::set<int>{16, 29, 8, 30, 4, 15, 2, 23, 1, 27});
  CHECK(corona_set(t, Corona::Small) == std::set<int>{9, 26, 20, 13, 10, 22, 5, 11, 18, 21});
  CHECK(corona_set(t, Corona::Zero) == std::set<int>{0, 31});
  CHECK(t[0].corona == Corona::Zero);
  CHECK(norm(t[0].v_ab) == 0.0);
  CHECK(norm(t[0].v_xy) == 0.0);
}

TEST_CASE("pentagon moduli") {
  const double vdc = 300.0;
  const double c1 = 2.0 * std::cos(std::numbers::pi / 5.0);
  const double c2 = 2.0 * std::cos(2.0 * std::numbers::pi / 5.0);
  const auto t = build_vv_table(vdc);
  double max_ab = 0.0;
  for (const auto& v : t) max_ab = std::max(max_ab, norm(v.v_ab));
  for (const auto& v : t) {
    switch (v.corona) {
      case Corona::Large:
        CHECK(norm(v.v_ab) == doctest::Approx(0.4 * vdc * c1).epsilon(1e-12));
        CHECK(norm(v.v_ab) == doctest::Approx(max_ab).epsilon(1e-12));
        CHECK(norm(v.v_xy) == doctest::Approx(0.4 * vdc * c2).epsilon(1e-12));
        CHECK(norm(v.v_ab) / vdc == doctest::Approx(0.6472).epsilon(1e-4));
        CHECK(norm(v.v_xy) / vdc == doctest::Approx(0.2472).epsilon(1e-4));
        break;
      case Corona::Medium:
        CHECK(norm(v.v_ab) == doctest::Approx(0.4 * vdc).epsilon(1e-12));
        break;
      case Corona::Small:
        CHECK(norm(v.v_ab) == doctest::Approx(0.4 * vdc * c2).epsilon(1e-12));
        break;
      case Corona::Zero:
        CHECK(norm(v.v_ab) < 1e-12);
        break;
    }
  }
}

TEST_CASE("virtual vectors") {
  const double vdc = 300.0;
  const auto vv = build_vv_table(vdc);
  const auto vvv = build_vvv_table(vv);
  CHECK(vvv.size() == 11);
  CHECK(vvv[0].is_null);
  std::set<int> larges, mediums;
  for (const auto& v : vvv) {
    CHECK(v.tL + v.tM == doctest::Approx(1.0).epsilon(1e-15));
    if (v.is_null) continue;
    REQUIRE(v.large);
    REQUIRE(v.medium);
    CHECK(v.large->corona == Corona::Large);
    CHECK(v.medium->corona == Corona::Medium);
    larges.insert(v.large->index);
    mediums.insert(v.medium->index);
    CHECK(std::abs(v.tL - 0.618) < 1e-3);
    CHECK(std::abs(v.tM - 0.382) < 1e-3);
    CHECK(v.tL / v.tM == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    const double ax = v.tL * v.large->v_xy.alpha + v.tM * v.medium->v_xy.alpha;
    const double ay = v.tL * v.large->v_xy.beta + v.tM * v.medium->v_xy.beta;
    CHECK(std::hypot(ax, ay) < 1e-12 * vdc);
    CHECK(norm(v.v_ab_avg) / vdc == doctest::Approx(0.618034 * 0.647214 + 0.381966 * 0.4).epsilon(1e-5));
    CHECK(norm(v.v_ab_avg) / vdc == doctest::Approx(0.5528).epsilon(1e-4));
    // Colinear with the Large vector.
    const double cross = v.v_ab_avg.alpha * v.large->v_ab.beta - v.v_ab_avg.beta * v.large->v_ab.alpha;
    CHECK(std::abs(cross) < 1e-9 * vdc * vdc);
  }
  CHECK(larges.size() == 10);
  CHECK(mediums.size() == 10);
}

TEST_CASE("switch changes is a metric on the leg cube") {
  CHECK(switch_changes(legs_from_index(0), legs_from_index(0)) == 0);
  CHECK(switch_changes(legs_from_index(0), legs_from_index(31)) == 5);
  CHECK(switch_changes(Legs{1, 0, 0, 0, 0}, Legs{0, 1, 0, 0, 0}) == 2);
  for (int a = 0; a < 32; ++a) {
    for (int b = 0; b < 32; ++b) {
      const int d = switch_changes(legs_from_index(a), legs_from_index(b));
      CHECK(d == switch_changes(legs_from_index(b), legs_from_index(a)));
      CHECK((d == 0) == (a == b));
      for (int c = 0; c < 32; ++c) {
        CHECK(d <= switch_changes(legs_from_index(a), legs_from_index(c)) +
                       switch_changes(legs_from_index(c), legs_from_index(b)));
      }
    }
  }
}

TEST_CASE("virtual vector commutations") {
  const auto vvv = build_vvv_table(build_vv_table(300.0));
  for (const auto& v : vvv) {
    if (v.is_null) {
      const auto r = vvv_switch_changes(Legs{}, v);
      CHECK(r.inter_period == 0);
      CHECK(r.intra_period == 0);
      CHECK(r.last_legs == Legs{});
      const auto r31 = vvv_switch_changes(Legs{1, 1, 1, 1, 1}, v);
      CHECK(r31.inter_period == 0);
      CHECK(r31.last_legs == (Legs{1, 1, 1, 1, 1}));
      continue;
    }
    const auto first = vvv_switch_changes(Legs{}, v);
    CHECK(first.intra_period == 2);
    CHECK(first.last_legs == v.medium->legs);
    // Repeating the same vector: Medium legs back to Large legs.
    const auto again = vvv_switch_changes(first.last_legs, v);
    int flips = 0;
    for (int i = 0; i < 5; ++i) flips += v.medium->legs[i] != v.large->legs[i];
    CHECK(flips == 2);
    CHECK(again.inter_period == 2);
  }
}

TEST_CASE("allowed vector sets") {
  const auto t = build_vv_table(300.0);
  const auto zl = avv_members(AvvSet::ZetaL, t);
  CHECK(zl.size() == 12);
  CHECK(std::is_sorted(zl.begin(), zl.end()));
  CHECK(avv_members(AvvSet::ZetaW, t).size() == 32);
}

TEST_CASE("table CSV output") {
  const VsiTables tables(300.0);
  std::ostringstream vv, vvv;
  write_vv_csv(vv, tables.vv);
  write_vvv_csv(vvv, tables.vvv);
  const std::string a = vv.str();
  const std::string b = vvv.str();
  CHECK(std::count(a.begin(), a.end(), '\n') == 33);
  CHECK(std::count(b.begin(), b.end(), '\n') == 12);
  CHECK(a.rfind("index,legs,v_alpha,v_beta,v_x,v_y,corona\n", 0) == 0);
}

}
