#pragma once

#include <Eigen/Dense>

#include "hdich/errors.hpp"

namespace hdich {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Matrix identity_matrix(int n) { return Matrix::Identity(n, n); }

/// Spectral norm: the largest singular value.
inline double operator_norm(const Matrix& m) {
  if (!m.allFinite()) throw NumericalError("operator_norm: non-finite entries");
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline double smallest_singular_value(const Matrix& m) {
  if (!m.allFinite()) throw NumericalError("smallest_singular_value: non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

/// Inverse with an explicit singularity check.
inline Matrix invert(const Matrix& m) {
  if (!m.allFinite()) throw NumericalError("invert: non-finite entries");
  Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible()) throw SingularMatrixError("invert: matrix is numerically singular");
  return lu.inverse();
}

/// Rank of a (possibly oblique) projection. Nonzero singular values of an
/// idempotent matrix are >= 1, so 0.5 separates them from the null ones.
inline int projection_rank(const Matrix& p) {
  if (!p.allFinite()) throw NumericalError("projection_rank: non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(p);
  const auto& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > 0.5) ++r;
  return r;
}

inline double condition_number(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

}  // namespace hdich
