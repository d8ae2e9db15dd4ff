#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hdich/checkers.hpp"
#include "common.hpp"

using namespace hdich;

TEST_CASE("hyperbolic family fits K=1, mu=1 in both modes", "[checkers][growth]") {
  for (const auto& h : common::rates()) {
    auto f = systems::diagonal_hyperbolic(h, 1.0);
    SigmaGrid grid(h, 0.0, common::span_for(h), 25);
    const auto g = fit_growth_bound(f, h, grid, BoundMode::Growth);
    INFO(h.name());
    CHECK_FALSE(g.degenerate);
    CHECK(g.K == Catch::Approx(1.0).margin(1e-9));
    CHECK(g.mu == Catch::Approx(1.0).margin(1e-9));
    CHECK(g.max_violation <= 1e-12);
    const auto d = fit_growth_bound(f, h, grid, BoundMode::Decay);
    CHECK(d.K == Catch::Approx(1.0).margin(1e-9));
    CHECK(d.mu == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("flat norm profiles take the degenerate rule", "[checkers][growth]") {
  auto h = GrowthRate::polynomial();
  SigmaGrid grid(h, 0.0, 6.0, 20);
  // identity: ||T|| == 1 everywhere
  const auto gi = fit_growth_bound(systems::identity(h, 2), h, grid, BoundMode::Growth);
  CHECK(gi.degenerate);
  CHECK(gi.K == 1.0);
  CHECK(gi.mu == 1.0);
  // rotations are isometries
  const auto gr = fit_growth_bound(systems::rotation(h, 1.0), h, grid, BoundMode::Growth);
  CHECK(gr.degenerate);
  CHECK(gr.K == 1.0);
  CHECK(gr.mu == 1.0);
}

TEST_CASE("decaying norms clamp to the smallest admissible exponent", "[checkers][growth]") {
  auto h = GrowthRate::polynomial();
  SigmaGrid grid(h, 0.0, 6.0, 20);
  const auto g = fit_growth_bound(systems::scalar_stable(h, 1.0), h, grid, BoundMode::Growth);
  CHECK(g.K == 1.0);
  CHECK(g.mu == 1e-3);  // tie-break: smallest mu >= 1e-3
  CHECK(g.max_violation <= 1e-12);
}

TEST_CASE("growth fits agree with the rescaled family", "[checkers][growth][metamorphic]") {
  for (const auto& h : common::rates()) {
    if (h.name() == "exp") continue;
    for (const auto& f : common::families(h)) {
      const auto mp = common::metamorphic_pair(f, h);
      for (const auto mode : {BoundMode::Growth, BoundMode::Decay}) {
        const auto a = fit_growth_bound(mp.direct, mp.h, mp.grid, mode);
        const auto b = fit_growth_bound(mp.rescaled, mp.exp_rate, mp.sigma_grid, mode);
        INFO(f.name() << " / " << h.name() << " mode=" << (mode == BoundMode::Growth ? "g" : "d"));
        CHECK(std::abs(a.K - b.K) <= 1e-9);
        CHECK(std::abs(a.mu - b.mu) <= 1e-9);
        CHECK(a.degenerate == b.degenerate);
      }
    }
  }
}
