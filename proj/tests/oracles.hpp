#pragma once

// Independent reference computations for the test suite. These deliberately
// avoid the library's own search/estimation code paths.

#include <cmath>
#include <functional>
#include <random>

#include "hdich/matrix_ops.hpp"

namespace oracle {

using hdich::Matrix;
using hdich::Vector;

/// max ||M v|| over seeded random unit vectors.
inline double sphere_max_norm(const Matrix& m, int samples, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double best = 0.0;
  Vector v(m.cols());
  for (int k = 0; k < samples; ++k) {
    for (int i = 0; i < v.size(); ++i) v(i) = normal(rng);
    const double n = v.norm();
    if (n < 1e-12) continue;
    best = std::max(best, (m * (v / n)).norm());
  }
  return best;
}

/// e^A by scaling and squaring of the Taylor series.
inline Matrix expm(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  int squarings = 0;
  double nrm = a.cwiseAbs().sum();
  while (nrm > 0.5) {
    nrm *= 0.5;
    ++squarings;
  }
  const Matrix b = a / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(n, n);
  Matrix sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = (term * b) / k;
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Dense minimum of f over the unit circle; plain angle sweep.
inline double min_on_circle(const std::function<double(const Vector&)>& f, int samples = 40000) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double phi = 2.0 * M_PI * k / samples;
    Vector v(2);
    v << std::cos(phi), std::sin(phi);
    best = std::min(best, f(v));
  }
  return best;
}

/// Largest principal angle between the column spans of two orthonormal bases.
inline double max_principal_angle(const Matrix& u, const Matrix& v) {
  if (u.cols() == 0 && v.cols() == 0) return 0.0;
  if (u.cols() != v.cols()) return M_PI / 2.0;
  Eigen::JacobiSVD<Matrix> svd(u.transpose() * v);
  const auto& s = svd.singularValues();
  const double c = std::clamp(s(s.size() - 1), -1.0, 1.0);
  return std::acos(c);
}

}  // namespace oracle
