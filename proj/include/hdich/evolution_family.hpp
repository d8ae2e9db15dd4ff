#pragma once

#include <functional>
#include <string>
#include <utility>

#include "hdich/errors.hpp"
#include "hdich/matrix_ops.hpp"

namespace hdich {

enum class FamilyKind { ClosedForm, OdeGenerated, Rescaled };

inline std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::ClosedForm: return "closed-form";
    case FamilyKind::OdeGenerated: return "ode-generated";
    case FamilyKind::Rescaled: return "rescaled";
  }
  return "?";
}

// ============================================================================
// Evolution families
// ============================================================================
//
// A two-parameter family of invertible n x n transition matrices T(t, s),
// t, s > a0, with T(t, t) = Id and the cocycle law T(t, s)T(s, r) = T(t, r).
// Backward transitions (t < s) are the inverses T(s, t)^{-1}; the stored
// transition map is expected to cover both orientations directly.
//
// Families are immutable after construction. Transition evaluation is pure in
// (t, s) up to an internal node cache for ODE-generated families, whose fill
// is idempotent under concurrent reads.

class EvolutionFamily {
 public:
  using TransitionFn = std::function<Matrix(double, double)>;

  EvolutionFamily(std::string name, int dim, double a0, FamilyKind kind,
                  TransitionFn transition, double native_tol = 1e-9)
      : name_(std::move(name)),
        dim_(dim),
        a0_(a0),
        kind_(kind),
        transition_(std::move(transition)),
        native_tol_(native_tol) {
    if (dim_ < 1) throw RangeError("EvolutionFamily: dimension must be positive");
  }

  /// Complete a forward-only map: T(t, s) := T(s, t)^{-1} for t < s.
  static EvolutionFamily from_forward(std::string name, int dim, double a0,
                                      TransitionFn forward, double native_tol = 1e-9) {
    TransitionFn both = [fwd = std::move(forward)](double t, double s) {
      if (t >= s) return fwd(t, s);
      return invert(fwd(s, t));
    };
    return EvolutionFamily(std::move(name), dim, a0, FamilyKind::ClosedForm,
                           std::move(both), native_tol);
  }

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  double a0() const { return a0_; }
  FamilyKind kind() const { return kind_; }

  /// Residual budget for identity/cocycle/verification checks on this family.
  double native_tol() const { return native_tol_; }

  /// T(t, s); both orientations.
  Matrix operator()(double t, double s) const {
    if (!(t > a0_) || !(s > a0_))
      throw DomainError("EvolutionFamily: time outside (a0, inf)");
    return transition_(t, s);
  }

 private:
  std::string name_;
  int dim_;
  double a0_;
  FamilyKind kind_;
  TransitionFn transition_;
  double native_tol_;
};

}  // namespace hdich
