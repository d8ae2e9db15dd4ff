#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "hdich/evolution_family.hpp"
#include "hdich/growth_rate.hpp"
#include "hdich/ode.hpp"

namespace hdich {
namespace detail {

inline std::string num_str(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace detail

// Closed-form reference systems. All adopt the rate's left endpoint and are
// defined for both time orientations directly.
namespace systems {

/// diag((h(t)/h(s))^{-lambda}, (h(t)/h(s))^{+lambda}): one contracting and
/// one expanding direction at rate lambda.
inline EvolutionFamily diagonal_hyperbolic(const GrowthRate& h, double lambda = 1.0) {
  return EvolutionFamily(
      "diag-hyperbolic(" + h.name() + ",lambda=" + detail::num_str(lambda) + ")",
      2, h.a0(), FamilyKind::ClosedForm,
      [h, lambda](double t, double s) {
        const double x = h.log_eval(t) - h.log_eval(s);
        Matrix m = Matrix::Zero(2, 2);
        m(0, 0) = std::exp(-lambda * x);
        m(1, 1) = std::exp(lambda * x);
        return m;
      });
}

/// Scalar (h(t)/h(s))^{-lambda}: every solution decays.
inline EvolutionFamily scalar_stable(const GrowthRate& h, double lambda = 1.0) {
  return EvolutionFamily(
      "scalar-stable(" + h.name() + ",lambda=" + detail::num_str(lambda) + ")",
      1, h.a0(), FamilyKind::ClosedForm,
      [h, lambda](double t, double s) {
        Matrix m(1, 1);
        m(0, 0) = std::exp(-lambda * (h.log_eval(t) - h.log_eval(s)));
        return m;
      });
}

/// Planar rotation by omega * (ln h(t) - ln h(s)); with h = exp this is the
/// classic rotation by omega * (t - s). An isometry: no dichotomy.
inline EvolutionFamily rotation(const GrowthRate& h, double omega = 1.0) {
  return EvolutionFamily(
      "rotation(" + h.name() + ",omega=" + detail::num_str(omega) + ")",
      2, h.a0(), FamilyKind::ClosedForm,
      [h, omega](double t, double s) {
        const double a = omega * (h.log_eval(t) - h.log_eval(s));
        Matrix m(2, 2);
        m << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
        return m;
      });
}

/// diag((h(t)/h(s))^{-lambda}, 1): one contracting and one neutral direction.
/// The neutral coordinate blocks any dichotomy.
inline EvolutionFamily neutral(const GrowthRate& h, double lambda = 1.0) {
  return EvolutionFamily(
      "neutral(" + h.name() + ",lambda=" + detail::num_str(lambda) + ")",
      2, h.a0(), FamilyKind::ClosedForm,
      [h, lambda](double t, double s) {
        Matrix m = Matrix::Zero(2, 2);
        m(0, 0) = std::exp(-lambda * (h.log_eval(t) - h.log_eval(s)));
        m(1, 1) = 1.0;
        return m;
      });
}

/// T(t, s) = Id.
inline EvolutionFamily identity(const GrowthRate& h, int dim = 2) {
  return EvolutionFamily(
      "identity(" + h.name() + ",dim=" + std::to_string(dim) + ")",
      dim, h.a0(), FamilyKind::ClosedForm,
      [dim](double, double) { return Matrix::Identity(dim, dim); });
}

/// Conjugated family R T(t, s) R^{-1} for a fixed invertible R.
inline EvolutionFamily conjugated(const EvolutionFamily& base, const Matrix& r) {
  if (r.rows() != base.dim() || r.cols() != base.dim())
    throw RangeError("systems::conjugated: conjugator has wrong dimensions");
  const Matrix rinv = invert(r);
  return EvolutionFamily(
      "conj(" + base.name() + ")", base.dim(), base.a0(), base.kind(),
      [base, r, rinv](double t, double s) -> Matrix { return r * base(t, s) * rinv; },
      base.native_tol());
}

/// T(t, s) scaled by the bounded factor g(t)/g(s), g > 0.
inline EvolutionFamily scaled(const EvolutionFamily& base, std::function<double(double)> g,
                              const std::string& tag) {
  return EvolutionFamily(
      "scaled(" + base.name() + "," + tag + ")", base.dim(), base.a0(), base.kind(),
      [base, g](double t, double s) -> Matrix { return (g(t) / g(s)) * base(t, s); },
      base.native_tol());
}

inline Matrix planar_rotation(double angle) {
  Matrix r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

// ODE-generated counterparts.

/// x' = lambda * (h'/h)(t) * diag(-1, +1) x; fundamental solution equals
/// diagonal_hyperbolic up to integrator error.
inline EvolutionFamily diagonal_hyperbolic_ode(const GrowthRate& h, double lambda,
                                               double integrator_step) {
  if (!h.has_log_deriv())
    throw RangeError("diagonal_hyperbolic_ode: rate has no derivative information");
  return make_ode_family(
      "diag-hyperbolic-ode(" + h.name() + ",lambda=" + detail::num_str(lambda) + ")",
      [h, lambda](double t) {
        Matrix a = Matrix::Zero(2, 2);
        const double r = lambda * h.log_deriv(t);
        a(0, 0) = -r;
        a(1, 1) = r;
        return a;
      },
      2, h.a0(), integrator_step);
}

/// x' = lambda * (h'/h)(t) * diag(-1, 0) x.
inline EvolutionFamily neutral_ode(const GrowthRate& h, double lambda, double integrator_step) {
  if (!h.has_log_deriv())
    throw RangeError("neutral_ode: rate has no derivative information");
  return make_ode_family(
      "neutral-ode(" + h.name() + ",lambda=" + detail::num_str(lambda) + ")",
      [h, lambda](double t) {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = -lambda * h.log_deriv(t);
        return a;
      },
      2, h.a0(), integrator_step);
}

/// Constant generator; T(t, s) = e^{A (t - s)}.
inline EvolutionFamily constant_ode(const Matrix& a, double a0, double integrator_step,
                                    const std::string& tag = "constant-ode") {
  if (a.rows() != a.cols()) throw RangeError("constant_ode: generator must be square");
  const int dim = static_cast<int>(a.rows());
  return make_ode_family(tag, [a](double) { return a; }, dim, a0, integrator_step);
}

/// x' = omega [[0, 1], [-1, 0]] x; T(t, s) = planar rotation by omega (t - s).
inline EvolutionFamily rotation_ode(double omega, double integrator_step) {
  Matrix a(2, 2);
  a << 0.0, omega, -omega, 0.0;
  return constant_ode(a, kNegInf, integrator_step,
                      "rotation-ode(omega=" + detail::num_str(omega) + ")");
}

}  // namespace systems
}  // namespace hdich
