#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hdich/matrix_ops.hpp"
#include "oracles.hpp"

using namespace hdich;

TEST_CASE("operator norm of simple matrices", "[matrix_ops]") {
  CHECK(operator_norm(Matrix::Identity(3, 3)) == Catch::Approx(1.0).margin(1e-14));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  CHECK(operator_norm(d) == Catch::Approx(2.0).margin(1e-14));
}

TEST_CASE("operator norm matches the sphere-sampling oracle", "[matrix_ops]") {
  std::mt19937 rng(4242);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = normal(rng);
  const double sampled = oracle::sphere_max_norm(m, 100000, 1234);
  CHECK(operator_norm(m) == Catch::Approx(sampled).margin(1e-3));
  CHECK(operator_norm(m) >= sampled);  // sampling can only undershoot
}

TEST_CASE("non-finite input is rejected", "[matrix_ops]") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(operator_norm(m), NumericalError);
}

TEST_CASE("singular matrices cannot be inverted", "[matrix_ops]") {
  Matrix m(2, 2);
  m << 1.0, 2.0, 2.0, 4.0;
  CHECK_THROWS_AS(invert(m), SingularMatrixError);
  Matrix ok(2, 2);
  ok << 2.0, 0.0, 0.0, 0.5;
  CHECK(operator_norm(invert(ok) * ok - Matrix::Identity(2, 2)) <= 1e-14);
}

TEST_CASE("smallest singular value and projection rank", "[matrix_ops]") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 0.5;
  CHECK(smallest_singular_value(d) == Catch::Approx(0.5).margin(1e-14));
  Matrix p = Matrix::Zero(3, 3);
  p(0, 0) = 1.0;
  p(2, 2) = 1.0;
  CHECK(projection_rank(p) == 2);
  // Oblique projection: rank 1 with norm > 1.
  Matrix q(2, 2);
  q << 1.0, 5.0, 0.0, 0.0;
  CHECK(projection_rank(q) == 1);
}
