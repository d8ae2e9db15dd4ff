#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hdich/checkers.hpp"
#include "common.hpp"
#include "oracles.hpp"

using namespace hdich;

TEST_CASE("scalar stable family: theta = e^{-lambda C}", "[checkers][noncritical]") {
  auto h = GrowthRate::polynomial();
  auto f = systems::scalar_stable(h, 1.0);
  SigmaGrid grid(h, 0.0, 8.0, 50);
  for (const double c : {0.5, 1.0, 2.0}) {
    const auto nc = estimate_noncriticality(f, h, c, grid, common::fast_sphere());
    INFO("C=" << c);
    CHECK(std::abs(nc.theta - std::exp(-c)) <= 1e-4 * std::exp(-c));
    CHECK(nc.pass);
  }
}

TEST_CASE("hyperbolic family: theta = cosh(2 lambda C)^{-1/2}", "[checkers][noncritical]") {
  auto h = GrowthRate::polynomial();
  auto f = systems::diagonal_hyperbolic(h, 1.0);
  SigmaGrid grid(h, 0.0, 8.0, 50);
  SphereSearchConfig sc;  // full density; tolerance is sphere-search bound
  for (const double c : {0.5, 1.0, 2.0}) {
    const auto nc = estimate_noncriticality(f, h, c, grid, sc);
    const double expected = 1.0 / std::sqrt(std::cosh(2.0 * c));
    INFO("C=" << c);
    CHECK(std::abs(nc.theta - expected) <= 1e-3 * expected);
  }
}

TEST_CASE("the cosh closed form matches a brute-force endpoint search",
          "[checkers][noncritical][oracle]") {
  // max over u of ||T(u,t)v||^2 = v1^2 e^{-2d} + v2^2 e^{2d} is convex in the
  // offset d, so it peaks at d = +-C; sweep the circle against both endpoints.
  const double c = 1.0;
  auto g = [&](const Vector& v) {
    const double plus = std::sqrt(v(0) * v(0) * std::exp(-2.0 * c) + v(1) * v(1) * std::exp(2.0 * c));
    const double minus = std::sqrt(v(0) * v(0) * std::exp(2.0 * c) + v(1) * v(1) * std::exp(-2.0 * c));
    return std::max(plus, minus);
  };
  const double theta_brute = 1.0 / oracle::min_on_circle(g);
  CHECK(theta_brute == Catch::Approx(1.0 / std::sqrt(std::cosh(2.0 * c))).epsilon(1e-6));
}

TEST_CASE("identity family is critical: theta = 1", "[checkers][noncritical]") {
  auto h = GrowthRate::polynomial();
  auto f = systems::identity(h, 2);
  SigmaGrid grid(h, 0.0, 6.0, 25);
  const auto nc = estimate_noncriticality(f, h, 1.0, grid, common::fast_sphere());
  CHECK(nc.theta == Catch::Approx(1.0).margin(1e-12));
  CHECK_FALSE(nc.pass);
}

TEST_CASE("theta decreases strictly in the window size", "[checkers][noncritical][property]") {
  auto h = GrowthRate::polynomial();
  auto f = systems::diagonal_hyperbolic(h, 1.0);
  SigmaGrid grid(h, 0.0, 8.0, 40);
  double prev = 1.0;
  for (const double c : {0.5, 1.0, 2.0}) {
    const auto nc = estimate_noncriticality(f, h, c, grid, common::fast_sphere());
    CHECK(nc.theta < prev);
    prev = nc.theta;
  }
}

TEST_CASE("windows larger than the grid span are rejected", "[checkers][noncritical]") {
  auto h = GrowthRate::polynomial();
  auto f = systems::scalar_stable(h, 1.0);
  SigmaGrid grid(h, 0.0, 2.0, 10);
  CHECK_THROWS_AS(estimate_noncriticality(f, h, 3.0, grid, common::fast_sphere()),
                  EmptyRegionError);
  CHECK_THROWS_AS(estimate_noncriticality(f, h, -1.0, grid, common::fast_sphere()), RangeError);
}

TEST_CASE("noncriticality agrees with the rescaled family", "[checkers][noncritical][metamorphic]") {
  for (const auto& h : common::rates()) {
    if (h.name() == "exp") continue;
    for (const auto& f : common::families(h)) {
      const auto mp = common::metamorphic_pair(f, h);
      const double c = common::span_for(h) / 4.0;
      const auto a = estimate_noncriticality(mp.direct, mp.h, c, mp.grid, common::fast_sphere());
      const auto b =
          estimate_noncriticality(mp.rescaled, mp.exp_rate, c, mp.sigma_grid, common::fast_sphere());
      INFO(f.name() << " / " << h.name());
      CHECK(std::abs(a.theta - b.theta) <= 1e-9);
      CHECK(a.pass == b.pass);
    }
  }
}

TEST_CASE("refinement never loses to dense sampling", "[checkers][noncritical][property]") {
  for (const auto& h : common::rates()) {
    for (const auto& f : common::families(h)) {
      SigmaGrid grid(h, 0.0, common::span_for(h), 13);
      const auto nc =
          estimate_noncriticality(f, h, common::span_for(h) / 4.0, grid, common::fast_sphere(3));
      INFO(f.name() << " / " << h.name());
      CHECK(nc.theta >= nc.dense_theta - 1e-12);
    }
  }
}

TEST_CASE("expansiveness constants induce a noncritical window", "[checkers][noncritical]") {
  ExpansivenessConstants e;
  e.L = 1.0;
  e.beta = 1.0;
  const auto nc = expansive_to_noncritical(e, 0.5);
  CHECK(nc.C == Catch::Approx(std::log(4.0)).margin(1e-12));
  CHECK(nc.theta == Catch::Approx(0.5).margin(1e-12));

  // 2L = 1: C = ln(1/(1-margin)), heading to 0+ as the margin vanishes
  e.L = 0.5;
  for (const double margin : {0.1, 1e-3}) {
    const auto small = expansive_to_noncritical(e, margin);
    CHECK(small.C == Catch::Approx(std::log(1.0 / (1.0 - margin))).epsilon(1e-12));
    CHECK(small.theta < 1.0);
    CHECK(small.C > 0.0);
  }

  CHECK_THROWS_AS(expansive_to_noncritical(e, 0.0), RangeError);
  CHECK_THROWS_AS(expansive_to_noncritical(e, 1.0), RangeError);
  e.beta = 0.0;
  CHECK_THROWS_AS(expansive_to_noncritical(e, 0.5), RangeError);
}

TEST_CASE("chained constants from the hyperbolic family stay below one",
          "[checkers][noncritical]") {
  auto h = GrowthRate::polynomial();
  auto f = systems::diagonal_hyperbolic(h, 1.0);
  SigmaGrid grid(h, 0.0, 6.0, 21);
  const auto ex = estimate_expansiveness(f, h, 1.0, grid, common::fast_sphere());
  const auto nc = expansive_to_noncritical(ex, 0.5);
  CHECK(nc.theta < 1.0);
  CHECK(nc.theta == Catch::Approx(0.5).margin(1e-9));  // theta = 1 - margin by construction
}
