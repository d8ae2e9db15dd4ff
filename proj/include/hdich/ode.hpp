#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <utility>
#include <vector>

#include "hdich/errors.hpp"
#include "hdich/evolution_family.hpp"

namespace hdich {

using GeneratorFn = std::function<Matrix(double)>;

namespace detail {

// Fundamental-solution propagator for x' = A(t) x with fixed-step classical
// RK4. Requested times become cache knots; a transition is the ordered
// product of single-interval matrices between adjacent knots, so each
// interval is integrated at most once per direction and cocycle composition
// on knots is exact. Backward transitions integrate the interval backward
// rather than inverting the forward matrix.
class OdePropagator {
 public:
  OdePropagator(GeneratorFn generator, int dim, double step)
      : A_(std::move(generator)), dim_(dim), step_(step) {
    if (!(step_ > 0.0)) throw RangeError("make_ode_family: integrator_step must be positive");
  }

  Matrix eval(double t, double s) {
    if (t == s) return Matrix::Identity(dim_, dim_);
    std::lock_guard<std::mutex> lock(mu_);
    const auto key = std::make_pair(t, s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    knots_.insert(t);
    knots_.insert(s);
    const double lo = std::min(t, s), hi = std::max(t, s);
    std::vector<double> ks(knots_.lower_bound(lo), knots_.upper_bound(hi));
    Matrix m = Matrix::Identity(dim_, dim_);
    if (t > s) {
      for (std::size_t i = 0; i + 1 < ks.size(); ++i) m = segment(ks[i + 1], ks[i]) * m;
    } else {
      for (std::size_t i = ks.size() - 1; i >= 1; --i) m = segment(ks[i - 1], ks[i]) * m;
    }
    memo_.emplace(key, m);
    return m;
  }

 private:
  Matrix segment(double to, double from) {
    const auto key = std::make_pair(to, from);
    if (auto it = seg_.find(key); it != seg_.end()) return it->second;
    Matrix m = integrate(from, to);
    seg_.emplace(key, m);
    return m;
  }

  Matrix integrate(double from, double to) const {
    const double span = to - from;
    const double want = std::ceil(std::abs(span) / step_);
    if (!(want < 2.0e8))
      throw IntegrationError("make_ode_family: span too large for the fixed step");
    const int n = std::max(1, static_cast<int>(want));
    const double dt = span / n;
    Matrix m = Matrix::Identity(dim_, dim_);
    for (int i = 0; i < n; ++i) {
      const double tau = from + i * dt;
      const Matrix k1 = A_(tau) * m;
      const Matrix k2 = A_(tau + 0.5 * dt) * (m + (0.5 * dt) * k1);
      const Matrix k3 = A_(tau + 0.5 * dt) * (m + (0.5 * dt) * k2);
      const Matrix k4 = A_(tau + dt) * (m + dt * k3);
      m += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!m.allFinite())
        throw IntegrationError("make_ode_family: non-finite state during integration");
    }
    return m;
  }

  GeneratorFn A_;
  int dim_;
  double step_;
  mutable std::mutex mu_;
  std::set<double> knots_;
  std::map<std::pair<double, double>, Matrix> seg_;
  std::map<std::pair<double, double>, Matrix> memo_;
};

}  // namespace detail

/// Evolution family generated by x' = A(t) x, T(t, s) = fundamental solution.
inline EvolutionFamily make_ode_family(std::string name, GeneratorFn generator, int dim,
                                       double a0, double integrator_step) {
  auto prop = std::make_shared<detail::OdePropagator>(std::move(generator), dim, integrator_step);
  return EvolutionFamily(
      std::move(name), dim, a0, FamilyKind::OdeGenerated,
      [prop](double t, double s) { return prop->eval(t, s); },
      1e-6);
}

}  // namespace hdich
