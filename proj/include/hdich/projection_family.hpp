#pragma once

#include <functional>
#include <string>
#include <utility>

#include "hdich/errors.hpp"
#include "hdich/evolution_family.hpp"
#include "hdich/matrix_ops.hpp"
#include "hdich/sigma_grid.hpp"

namespace hdich {

/// t-indexed family of projections P(t) of constant rank, expected to commute
/// with the flow: P(t) T(t, s) = T(t, s) P(s).
class ProjectionFamily {
 public:
  using ProjFn = std::function<Matrix(double)>;

  static ProjectionFamily constant(const Matrix& p) {
    if (p.rows() != p.cols()) throw RangeError("ProjectionFamily: matrix must be square");
    const int rank = projection_rank(p);
    return ProjectionFamily(static_cast<int>(p.rows()), rank, [p](double) { return p; });
  }

  /// P(t) = T(t, anchor) P0 T(anchor, t): commutation with the flow holds by
  /// construction, residuals then measure only numerical conditioning.
  static ProjectionFamily propagated(const EvolutionFamily& family, const Matrix& p_anchor,
                                     double anchor) {
    if (p_anchor.rows() != family.dim() || p_anchor.cols() != family.dim())
      throw RangeError("ProjectionFamily: projection has wrong dimensions");
    const int rank = projection_rank(p_anchor);
    return ProjectionFamily(
        family.dim(), rank,
        [family, p_anchor, anchor](double t) -> Matrix {
          return family(t, anchor) * p_anchor * family(anchor, t);
        });
  }

  static ProjectionFamily from_map(int dim, int rank, ProjFn fn) {
    return ProjectionFamily(dim, rank, std::move(fn));
  }

  int dim() const { return dim_; }
  int rank() const { return rank_; }

  Matrix operator()(double t) const {
    Matrix p = fn_(t);
    if (operator_norm(p) > 1e6)
      throw ConditioningError("ProjectionFamily: ||P(t)|| exceeds 1e6 (subspace angles collapsing)");
    return p;
  }

  struct Validation {
    double max_idempotency = 0.0;
    double max_commutation = 0.0;
    bool rank_constant = true;
  };

  /// Idempotency, rank constancy and flow commutation over a grid.
  Validation validate(const EvolutionFamily& family, const SigmaGrid& grid) const {
    Validation v;
    const int n = grid.size();
    std::vector<Matrix> ps(n);
    for (int i = 0; i < n; ++i) {
      ps[i] = (*this)(grid.t(i));
      v.max_idempotency = std::max(v.max_idempotency, operator_norm(ps[i] * ps[i] - ps[i]));
      if (projection_rank(ps[i]) != rank_) v.rank_constant = false;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        const Matrix tij = family(grid.t(i), grid.t(j));
        v.max_commutation =
            std::max(v.max_commutation, operator_norm(ps[i] * tij - tij * ps[j]));
      }
    return v;
  }

 private:
  ProjectionFamily(int dim, int rank, ProjFn fn) : dim_(dim), rank_(rank), fn_(std::move(fn)) {}

  int dim_;
  int rank_;
  ProjFn fn_;
};

}  // namespace hdich
