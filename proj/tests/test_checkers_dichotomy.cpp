#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hdich/checkers.hpp"
#include "common.hpp"

using namespace hdich;

namespace {

ProjectionFamily diag_proj(std::initializer_list<double> entries) {
  Matrix p = Matrix::Zero(entries.size(), entries.size());
  int i = 0;
  for (const double e : entries) p(i, i) = e, ++i;
  return ProjectionFamily::constant(p);
}

}  // namespace

TEST_CASE("scalar stable family verifies with the full projection", "[checkers][dichotomy]") {
  auto h = GrowthRate::polynomial();
  auto f = systems::scalar_stable(h, 1.0);
  SigmaGrid grid(h, 0.0, 6.0, 25);
  const auto rep = verify_h_dichotomy(f, h, diag_proj({1.0}), {1.0, 1.0}, grid);
  CHECK(rep.pass);
  // bound holds with equality; violations are pure round-off
  CHECK(rep.max_violation_invariance <= 1e-14);
  CHECK(rep.max_violation_stable <= 1e-14);
  CHECK(rep.max_violation_unstable <= 1e-14);
}

TEST_CASE("hyperbolic family verifies for every rate", "[checkers][dichotomy]") {
  for (const auto& h : common::rates()) {
    auto f = systems::diagonal_hyperbolic(h, 1.0);
    SigmaGrid grid(h, 0.0, common::span_for(h), 25);
    const auto rep = verify_h_dichotomy(f, h, diag_proj({1.0, 0.0}), {1.0, 1.0}, grid);
    INFO(h.name());
    CHECK(rep.pass);
    CHECK(rep.max_violation_stable <= 1e-12);
  }
}

TEST_CASE("swapping the projection exposes the expanding direction", "[checkers][dichotomy]") {
  auto h = GrowthRate::polynomial();
  auto f = systems::diagonal_hyperbolic(h, 1.0);
  SigmaGrid grid(h, 0.0, 6.0, 25);
  const auto rep = verify_h_dichotomy(f, h, diag_proj({0.0, 1.0}), {1.0, 1.0}, grid);
  CHECK_FALSE(rep.pass);
  // worst pair: ||T P|| = e^{+x}, bound = e^{-x} at the full span x = 6
  const double expected = std::exp(6.0) - std::exp(-6.0);
  CHECK(rep.max_violation_stable == Catch::Approx(expected).epsilon(1e-9));
}

TEST_CASE("rank changes across the grid are rejected", "[checkers][dichotomy]") {
  auto h = GrowthRate::polynomial();
  auto f = systems::diagonal_hyperbolic(h, 1.0);
  SigmaGrid grid(h, 0.0, 6.0, 10);
  const double mid = grid.t(grid.size() / 2);
  auto p = ProjectionFamily::from_map(2, 1, [mid](double t) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    if (t > mid) m(1, 1) = 1.0;
    return m;
  });
  CHECK_THROWS_AS(verify_h_dichotomy(f, h, p, {1.0, 1.0}, grid), RankError);
}

TEST_CASE("verification agrees with the rescaled family", "[checkers][dichotomy][metamorphic]") {
  for (const auto& h : common::rates()) {
    if (h.name() == "exp") continue;
    for (const auto& f : common::families(h)) {
      const auto mp = common::metamorphic_pair(f, h);
      const auto proj = f.dim() == 1 ? diag_proj({1.0}) : diag_proj({1.0, 0.0});
      const auto a = verify_h_dichotomy(mp.direct, mp.h, proj, {1.0, 1.0}, mp.grid);
      const auto b = verify_h_dichotomy(mp.rescaled, mp.exp_rate, proj, {1.0, 1.0}, mp.sigma_grid);
      INFO(f.name() << " / " << h.name());
      CHECK(a.pass == b.pass);
      CHECK(std::abs(a.max_violation_invariance - b.max_violation_invariance) <= 1e-9);
      CHECK(std::abs(a.max_violation_stable - b.max_violation_stable) <= 1e-9);
      CHECK(std::abs(a.max_violation_unstable - b.max_violation_unstable) <= 1e-9);
    }
  }
}

TEST_CASE("ode-generated family verifies at its native tolerance", "[checkers][dichotomy]") {
  auto h = GrowthRate::polynomial();
  auto f = systems::diagonal_hyperbolic_ode(h, 1.0, 0.002);
  SigmaGrid grid(h, 0.0, 4.0, 15);
  const auto rep = verify_h_dichotomy(f, h, diag_proj({1.0, 0.0}), {1.0, 1.0}, grid);
  CHECK(rep.tol == 1e-6);
  CHECK(rep.pass);
}
