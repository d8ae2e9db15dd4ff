#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hdich/rescale.hpp"
#include "hdich/sigma_grid.hpp"
#include "hdich/systems.hpp"

using namespace hdich;

TEST_CASE("exponential rate rescales to itself", "[rescale]") {
  auto h = GrowthRate::exponential();
  auto f = systems::diagonal_hyperbolic(h, 1.0);
  auto fh = rescale_family(f, h);
  for (const auto& [t, s] : {std::pair{2.0, 0.5}, {0.0, 3.0}, {-1.0, -4.0}})
    CHECK(operator_norm(fh(t, s) - f(t, s)) <= 1e-15);
}

TEST_CASE("scalar power family rescales to a pure exponential", "[rescale]") {
  auto h = GrowthRate::polynomial();
  auto f = systems::scalar_stable(h, 1.0);  // T(t, s) = (t/s)^{-1}
  auto fh = rescale_family(f, h);
  for (const auto& [t, s] : {std::pair{2.0, 0.0}, {1.3, -0.7}, {-2.0, 1.0}})
    CHECK(fh(t, s)(0, 0) == Catch::Approx(std::exp(-(t - s))).epsilon(1e-13));
}

TEST_CASE("rescaling round trip recovers the base family", "[rescale][property]") {
  for (const auto& h : {GrowthRate::polynomial(), GrowthRate::logarithmic()}) {
    const double span = h.name() == "log" ? 1.5 : 6.0;
    for (const auto& f : {systems::diagonal_hyperbolic(h, 1.0), systems::rotation(h, 1.0)}) {
      auto fh = rescale_family(f, h);
      SigmaGrid grid(h, 0.0, span, 20);
      double worst = 0.0;
      for (int i = 0; i < grid.size(); ++i)
        for (int j = 0; j < grid.size(); ++j) {
          const Matrix direct = f(grid.t(i), grid.t(j));
          const Matrix via = fh(h.log_eval(grid.t(i)), h.log_eval(grid.t(j)));
          worst = std::max(worst, operator_norm(direct - via));
        }
      INFO(f.name());
      CHECK(worst <= 1e-12);
    }
  }
}

TEST_CASE("rescaled family is itself an evolution family", "[rescale][property]") {
  auto h = GrowthRate::logarithmic();
  auto f = systems::diagonal_hyperbolic(h, 1.0);
  auto fh = rescale_family(f, h);
  CHECK(fh.a0() == kNegInf);
  auto he = GrowthRate::exponential();
  SigmaGrid grid(he, 0.0, 1.5, 12);
  const Matrix id = Matrix::Identity(2, 2);
  double worst = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, operator_norm(fh(grid.t(i), grid.t(i)) - id));
    for (int j = 0; j <= i; ++j) {
      worst = std::max(worst,
                       operator_norm(fh(grid.t(i), grid.t(j)) * fh(grid.t(j), grid.t(i)) - id));
      for (int k = 0; k <= j; ++k)
        worst = std::max(worst, operator_norm(fh(grid.t(i), grid.t(k)) -
                                              fh(grid.t(i), grid.t(j)) * fh(grid.t(j), grid.t(k))));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("sigma coordinate bridge", "[rescale]") {
  CHECK(sigma_of_t(GrowthRate::exponential(), 3.0) == 3.0);
  CHECK(sigma_of_t(GrowthRate::polynomial(), std::exp(2.0)) == Catch::Approx(2.0).margin(1e-14));
  // ln(ln t) = 0  =>  t = e
  CHECK(t_of_sigma(GrowthRate::logarithmic(), 0.0) == Catch::Approx(std::exp(1.0)).epsilon(1e-13));
}

TEST_CASE("mismatched domains are rejected", "[rescale]") {
  auto f = systems::diagonal_hyperbolic(GrowthRate::polynomial(), 1.0);  // a0 = 0
  CHECK_THROWS_AS(rescale_family(f, GrowthRate::logarithmic()), DomainError);  // a0 = 1
  CHECK_THROWS_AS(rescale_family(f, GrowthRate::exponential()), DomainError);  // a0 = -inf
}
