#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "pentadrive/csv.hpp"
#include "pentadrive/metrics.hpp"

using namespace pentadrive;

namespace {

std::vector<double> sampled(std::size_t per_period, std::size_t periods, auto&& f) {
  std::vector<double> out;
  for (std::size_t i = 0; i < per_period * periods; ++i) {
    // Mid-sample phase keeps square-wave edges between samples.
    out.push_back(f(2.0 * std::numbers::pi * (i + 0.5) / per_period));
  }
  return out;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("third harmonic") {
  const auto v = sampled(400, 3, [](double th) { return std::sin(th) + 0.1 * std::sin(3 * th); });
  const auto t = thd(v, 3);
  REQUIRE(t);
  CHECK(std::abs(*t - 10.0) < 1e-4);
}

TEST_CASE("square wave against its Fourier series") {
  const std::size_t m = 2000;
  const auto v = sampled(m, 2, [](double th) { return std::sin(th) >= 0.0 ? 1.0 : -1.0; });
  double series = 0.0;
  for (std::size_t h = 3; 2 * h < m; h += 2) series += 1.0 / double(h * h);
  const double expected = 100.0 * std::sqrt(series);
  const auto t = thd(v, 2);
  REQUIRE(t);
  CHECK(std::abs(*t - expected) / expected < 0.005);
  CHECK(*t == doctest::Approx(48.3).epsilon(0.005));
}

TEST_CASE("THD ignores DC and scale") {
  auto f = [](double th) { return std::sin(th) + 0.2 * std::cos(5 * th) + 0.05 * std::sin(7 * th); };
  const auto base = thd(sampled(256, 4, f), 4);
  const auto shifted = thd(sampled(256, 4, [&](double th) { return 5.0 + f(th); }), 4);
  const auto scaled = thd(sampled(256, 4, [&](double th) { return 3.0 * f(th); }), 4);
  REQUIRE(base);
  CHECK(*shifted == doctest::Approx(*base).epsilon(1e-10));
  CHECK(*scaled == doctest::Approx(*base).epsilon(1e-10));
  CHECK(*base == doctest::Approx(100.0 * std::hypot(0.2, 0.05)).epsilon(1e-10));
}

TEST_CASE("THD preconditions") {
  CHECK_FALSE(thd(std::vector<double>(100, 1.0), 2).has_value());
  CHECK_THROWS_AS(thd(std::vector<double>(101, 1.0), 2), std::invalid_argument);
  CHECK_THROWS_AS(thd(std::vector<double>(6, 1.0), 2), std::invalid_argument);
}

TEST_CASE("uniform resampling of unequal steps") {
  const std::vector<VoltageSample> s = {{0.0, 0.6, 1.0}, {0.6, 0.4, 3.0}, {1.0, 1.0, -2.0}};
  const auto r = resample_uniform(s, 0.0, 2.0, 4);
  REQUIRE(r.size() == 4);
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx((0.1 * 1.0 + 0.4 * 3.0) / 0.5));
  CHECK(r[2] == doctest::Approx(-2.0));
  CHECK(r[3] == doctest::Approx(-2.0));
}

TEST_CASE("tracking errors") {
  std::vector<std::array<double, 4>> e = {{3, 4, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 0}, {9, 9, 9, 9}};
  const auto te = tracking_errors(e, 0, 2);
  CHECK(te.E_ab == doctest::Approx(std::sqrt(25.0 / 3.0)));
  CHECK(te.E_xy == doctest::Approx(std::sqrt(1.0 / 3.0)));
  CHECK_THROWS_AS(tracking_errors(e, 0, 2, 10), std::invalid_argument);
  CHECK_THROWS_AS(tracking_errors(e, 2, 4), std::invalid_argument);
}

TEST_CASE("switching frequency") {
  const double Ts = 35e-6;
  const std::vector<int> alternating(1000, 5);  // u0 <-> u31 every period
  CHECK(average_switching_frequency(alternating, 0.0, 1000 * Ts) ==
        doctest::Approx(1.0 / (2.0 * Ts)).epsilon(1e-12));
  CHECK(average_switching_frequency(std::vector<int>(1000, 0), 0.0, 1.0) == 0.0);
  CHECK_THROWS_AS(average_switching_frequency(alternating, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("zero usage") {
  const std::vector<std::uint8_t> flags = {1, 0, 0, 1};
  CHECK(zero_usage(flags) == 50.0);
  CHECK(zero_usage(std::vector<std::uint8_t>(7, 1)) == 100.0);
  CHECK_THROWS_AS(zero_usage(std::vector<std::uint8_t>{}), std::invalid_argument);
}

TEST_CASE("metrics CSV round trip") {
  MetricsReport r;
  r.variant = "sv-zw";
  r.lambda_xy = 0.72;
  r.op = {30.0, 0.1 + 0.2, 0.03};
  r.PZ = 47.25;
  r.E_ab = 1.0 / 3.0;
  r.E_xy = 1e-17;
  r.ASF = 6180.339887498949;
  r.feasible = false;
  const auto back = parse_metrics_csv_row(metrics_csv_row(r));
  CHECK(back.variant == r.variant);
  CHECK(back.op.Is_star == r.op.Is_star);
  CHECK(back.E_ab == r.E_ab);
  CHECK(back.E_xy == r.E_xy);
  CHECK(back.ASF == r.ASF);
  CHECK_FALSE(back.THD_V.has_value());
  CHECK_FALSE(back.feasible);
  CHECK(metrics_csv_row(back) == metrics_csv_row(r));
  CHECK(metrics_csv_header() == "variant,fe,Is_star,lambda_xy,lambda_sc,PZ,E_ab,E_xy,ASF,THD_V,feasible");
}

TEST_CASE("double formatting") {
  for (double v : {0.0, -1.5, 0.1, 1e-300, 123456789.123, 35e-6}) {
    CHECK(parse_double(fmt_double(v)) == v);
  }
  CHECK(fmt_double(std::nan("")) == "nan");
  CHECK(std::isnan(parse_double("nan")));
  CHECK_THROWS_AS(parse_double("1.5x"), std::invalid_argument);
}

}
