#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "hdich/errors.hpp"
#include "hdich/evolution_family.hpp"
#include "hdich/growth_rate.hpp"
#include "hdich/matrix_ops.hpp"
#include "hdich/projection_family.hpp"
#include "hdich/sigma_grid.hpp"
#include "hdich/sphere_search.hpp"

namespace hdich {

// ============================================================================
// Quantitative hyperbolicity notions
// ============================================================================
//
// Four gradations of control relative to a growth rate h, all evaluated on
// sigma grids (sigma = ln h(t), x = sigma difference >= 0):
//
//   bounded growth    ||T(t, s)||             <= K e^{+mu x}        (t >= s)
//   bounded decay     ||T(t, s)||             <= K e^{+mu x}        (t <= s)
//   dichotomy         ||T(t, s) P(s)||        <= D e^{-lambda x}    (t >= s)
//                     ||T(t, s) (Id - P(s))|| <= D e^{-lambda x}    (t <= s)
//   expansiveness     ||v|| <= L ( e^{-beta (x_t - x_a)} ||T(a, t) v||
//                                + e^{-beta (x_b - x_t)} ||T(b, t) v|| )
//   noncriticality    ||v|| <= theta sup{ ||T(u, t) v|| : |x_u - x_t| <= C },
//                     theta < 1

// ---------------------------------------------------------------------------

struct GrowthBound {
  double K = 1.0;
  double mu = 1.0;
  double max_violation = 0.0;  // largest relative excess over the bound; 0 by construction
  double inflation = 1.0;      // factor added to the least-squares intercept
  bool degenerate = false;     // all norm samples coincide; fit replaced by K = max norm, mu = 1
};

enum class BoundMode { Growth, Decay };

/// Least-squares fit of (ln K, mu) over ln||T|| <= ln K + mu x, with K then
/// inflated so the bound holds with equality at the worst grid pair. When the
/// exponent is unconstrained by the data, the smallest mu >= 1e-3 (then the
/// smallest K) wins.
inline GrowthBound fit_growth_bound(const EvolutionFamily& family, const GrowthRate&,
                                    const SigmaGrid& grid, BoundMode mode) {
  const int n = grid.size();
  std::vector<double> xs, ys;
  xs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  ys.reserve(xs.capacity());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      const double nrm = (mode == BoundMode::Growth)
                             ? operator_norm(family(grid.t(i), grid.t(j)))
                             : operator_norm(family(grid.t(j), grid.t(i)));
      xs.push_back(grid.sigma(i) - grid.sigma(j));
      ys.push_back(std::log(nrm));
    }

  GrowthBound gb;
  const auto [ymin_it, ymax_it] = std::minmax_element(ys.begin(), ys.end());
  if (*ymax_it - *ymin_it < 1e-12) {
    gb.degenerate = true;
    gb.mu = 1.0;
    gb.K = std::max(1.0, std::exp(*ymax_it));
    return gb;
  }

  double xm = 0, ym = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    xm += xs[k];
    ym += ys[k];
  }
  xm /= xs.size();
  ym /= ys.size();
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - xm) * (xs[k] - xm);
    sxy += (xs[k] - xm) * (ys[k] - ym);
  }
  double mu = sxy / sxx;
  mu = std::max(mu, 1e-3);

  double c_ls = 0;
  double c = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - mu * xs[k];
    c_ls += r;
    c = std::max(c, r);
  }
  c_ls /= xs.size();

  gb.mu = mu;
  gb.K = std::max(1.0, std::exp(c));
  gb.inflation = gb.K / std::exp(c_ls);
  double maxv = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double bound = gb.K * std::exp(mu * xs[k]);
    maxv = std::max(maxv, (std::exp(ys[k]) - bound) / bound);
  }
  gb.max_violation = std::max(0.0, maxv);
  return gb;
}

// ---------------------------------------------------------------------------

struct DichotomyConstants {
  double D = 1.0;
  double lambda = 1.0;
};

struct DichotomyReport {
  double max_violation_invariance = 0.0;
  double max_violation_stable = 0.0;
  double max_violation_unstable = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Check the dichotomy inequalities for given projections and constants over
/// every ordered grid pair. The backward bound applies the global inverse to
/// the complementary projection. tol <= 0 selects the family's native budget.
inline DichotomyReport verify_h_dichotomy(const EvolutionFamily& family, const GrowthRate&,
                                          const ProjectionFamily& proj,
                                          const DichotomyConstants& c, const SigmaGrid& grid,
                                          double tol = 0.0) {
  if (tol <= 0.0) tol = family.native_tol();
  const int n = grid.size();
  std::vector<Matrix> ps(n);
  int rank0 = -1;
  for (int i = 0; i < n; ++i) {
    ps[i] = proj(grid.t(i));
    const int r = projection_rank(ps[i]);
    if (rank0 < 0)
      rank0 = r;
    else if (r != rank0)
      throw RankError("verify_h_dichotomy: projection rank varies across the grid");
  }
  const Matrix id = Matrix::Identity(family.dim(), family.dim());
  DichotomyReport rep;
  rep.tol = tol;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double x = grid.sigma(i) - grid.sigma(j);
      const double bound = c.D * std::exp(-c.lambda * x);
      const Matrix fwd = family(grid.t(i), grid.t(j));  // t >= s
      rep.max_violation_invariance = std::max(
          rep.max_violation_invariance, operator_norm(ps[i] * fwd - fwd * ps[j]));
      rep.max_violation_stable = std::max(
          rep.max_violation_stable, std::max(0.0, operator_norm(fwd * ps[j]) - bound));
      const Matrix bwd = family(grid.t(j), grid.t(i));  // t <= s
      rep.max_violation_unstable = std::max(
          rep.max_violation_unstable, std::max(0.0, operator_norm(bwd * (id - ps[i])) - bound));
    }
  rep.pass = rep.max_violation_invariance <= tol && rep.max_violation_stable <= tol &&
             rep.max_violation_unstable <= tol;
  return rep;
}

// ---------------------------------------------------------------------------

struct ExpansivenessConstants {
  double L = 0.0;
  double beta = 0.0;
  double window_max = 0.0;  // largest b - a in sigma units tested
  bool diverging = false;   // ratios keep growing as windows widen
  double dense_L = 0.0;     // supremum before sphere-search refinement
  std::vector<std::pair<double, double>> window_profile;  // (full width, max ratio)
};

/// L = sup over grid triples a <= t <= b and unit v of
///   ||v|| / (e^{-beta (x_t - x_a)} ||T(a, t) v|| + e^{-beta (x_b - x_t)} ||T(b, t) v||).
/// For fixed (t, v) the denominator separates into independent minima over a
/// and over b, so the triple supremum reduces to one sphere search per t.
inline ExpansivenessConstants estimate_expansiveness(const EvolutionFamily& family,
                                                     const GrowthRate&, double beta,
                                                     const SigmaGrid& grid,
                                                     const SphereSearchConfig& cfg) {
  if (!(beta > 0.0)) throw RangeError("estimate_expansiveness: beta must be positive");
  const int n = grid.size();
  const int d = family.dim();

  std::vector<std::vector<Matrix>> tr(n, std::vector<Matrix>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      tr[i][j] = family(grid.t(i), grid.t(j));
      if (smallest_singular_value(tr[i][j]) <= 0.0)
        throw SingularMatrixError("estimate_expansiveness: singular transition on the grid");
    }

  // Symmetric-window ladder for the divergence diagnostic. Halfwidths are
  // grid-aligned so at least one node admits each window.
  const int half_nodes = (n - 1) / 2;
  const int ladder_n = std::min(8, half_nodes);
  std::vector<double> ladder(ladder_n);
  std::vector<double> ladder_best(ladder_n, 0.0);
  for (int m = 0; m < ladder_n; ++m)
    ladder[m] = (half_nodes * (m + 1)) / ladder_n * grid.step();

  const auto samples = detail::sphere_samples(d, cfg);
  double best_ratio = 0.0, dense_ratio = 0.0;

  std::vector<double> wa(n), wb(n), fa(n), fb(n);
  std::vector<double> vals(samples.size());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) wa[i] = std::exp(-beta * (grid.sigma(j) - grid.sigma(i)));
    for (int k = j; k < n; ++k) wb[k] = std::exp(-beta * (grid.sigma(k) - grid.sigma(j)));

    auto objective = [&](const Vector& v) {
      double mina = std::numeric_limits<double>::infinity();
      double minb = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= j; ++i) mina = std::min(mina, wa[i] * (tr[i][j] * v).norm());
      for (int k = j; k < n; ++k) minb = std::min(minb, wb[k] * (tr[k][j] * v).norm());
      return mina + minb;
    };
    auto gradient = [&](const Vector& v) {
      int ia = 0, kb = j;
      double mina = std::numeric_limits<double>::infinity();
      double minb = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= j; ++i) {
        const double f = wa[i] * (tr[i][j] * v).norm();
        if (f < mina) { mina = f; ia = i; }
      }
      for (int k = j; k < n; ++k) {
        const double f = wb[k] * (tr[k][j] * v).norm();
        if (f < minb) { minb = f; kb = k; }
      }
      Vector g = Vector::Zero(v.size());
      const Vector av = tr[ia][j] * v;
      if (av.norm() > 0) g += wa[ia] * (tr[ia][j].transpose() * av) / av.norm();
      const Vector bv = tr[kb][j] * v;
      if (bv.norm() > 0) g += wb[kb] * (tr[kb][j].transpose() * bv) / bv.norm();
      return g;
    };

    // Dense pass; also feeds the per-window ladder.
    for (std::size_t si = 0; si < samples.size(); ++si) {
      const Vector& v = samples[si];
      for (int i = 0; i <= j; ++i) fa[i] = wa[i] * (tr[i][j] * v).norm();
      for (int k = j; k < n; ++k) fb[k] = wb[k] * (tr[k][j] * v).norm();
      double mina = std::numeric_limits<double>::infinity();
      double minb = std::numeric_limits<double>::infinity();
      for (int i = j; i >= 0; --i) mina = std::min(mina, fa[i]);
      for (int k = j; k < n; ++k) minb = std::min(minb, fb[k]);
      vals[si] = mina + minb;
      for (int m = 0; m < ladder_n; ++m) {
        const double w = ladder[m] + 1e-12;
        if (grid.sigma(j) - grid.sigma_min() < w - 2e-12 ||
            grid.sigma_max() - grid.sigma(j) < w - 2e-12)
          continue;
        double ma = std::numeric_limits<double>::infinity();
        double mb = std::numeric_limits<double>::infinity();
        for (int i = j; i >= 0 && grid.sigma(j) - grid.sigma(i) <= w; --i)
          ma = std::min(ma, fa[i]);
        for (int k = j; k < n && grid.sigma(k) - grid.sigma(j) <= w; ++k)
          mb = std::min(mb, fb[k]);
        ladder_best[m] = std::max(ladder_best[m], 1.0 / (ma + mb));
      }
    }
    const SphereMinimum sm = refine_on_sphere(samples, vals, objective, gradient, cfg);
    dense_ratio = std::max(dense_ratio, 1.0 / sm.dense_value);
    best_ratio = std::max(best_ratio, 1.0 / sm.value);
  }

  ExpansivenessConstants out;
  out.L = best_ratio;
  out.dense_L = dense_ratio;
  out.beta = beta;
  out.window_max = grid.span();
  for (int m = 0; m < ladder_n; ++m)
    out.window_profile.emplace_back(2.0 * ladder[m], ladder_best[m]);
  if (ladder_n >= 2) {
    const int lo = ladder_n / 2 - 1, hi = ladder_n - 1;
    if (ladder_best[lo] > 0 && ladder_best[hi] > 0 && ladder[hi] > ladder[lo]) {
      const double slope = (std::log(ladder_best[hi]) - std::log(ladder_best[lo])) /
                           (ladder[hi] - ladder[lo]);
      out.diverging = ladder_best[hi] > 1.0 && slope > beta / 4.0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

struct NoncriticalityConstants {
  double theta = 0.0;
  double C = 0.0;
  bool pass = false;  // theta < 1 with margin 1e-6
  double dense_theta = 0.0;
  std::vector<std::pair<double, double>> theta_profile;  // (sigma_t, theta at t)
};

/// theta = sup over admissible t (h(t) >= e^C h(a0*), a0* = the grid start)
/// and unit v of ||v|| / max{||T(u, t) v|| : |x_u - x_t| <= C} with the inner
/// supremum taken over a sub-grid of step C/50. Endpoints +-C are hit exactly.
inline NoncriticalityConstants estimate_noncriticality(const EvolutionFamily& family,
                                                       const GrowthRate& h, double window_c,
                                                       const SigmaGrid& grid,
                                                       const SphereSearchConfig& cfg) {
  if (!(window_c > 0.0)) throw RangeError("estimate_noncriticality: C must be positive");
  const int n = grid.size();
  const int d = family.dim();
  std::vector<int> admissible;
  for (int j = 0; j < n; ++j)
    if (grid.sigma(j) >= grid.sigma_min() + window_c - 1e-12) admissible.push_back(j);
  if (admissible.empty())
    throw EmptyRegionError("estimate_noncriticality: no grid point with h(t) >= e^C h(a0*)");

  const int half = 50;
  const double delta = window_c / half;
  const auto samples = detail::sphere_samples(d, cfg);
  std::vector<double> vals(samples.size());

  NoncriticalityConstants out;
  out.C = window_c;
  double worst = 0.0, worst_dense = 0.0;
  std::vector<Matrix> u(2 * half + 1);
  for (const int j : admissible) {
    for (int m = -half; m <= half; ++m)
      u[m + half] = family(h.inverse_exp(grid.sigma(j) + m * delta), grid.t(j));

    auto objective = [&](const Vector& v) {
      double mx = 0.0;
      for (const Matrix& um : u) mx = std::max(mx, (um * v).norm());
      return mx;
    };
    auto gradient = [&](const Vector& v) {
      double mx = -1.0;
      int act = 0;
      for (int m = 0; m < static_cast<int>(u.size()); ++m) {
        const double f = (u[m] * v).norm();
        if (f > mx) { mx = f; act = m; }
      }
      const Vector av = u[act] * v;
      if (av.norm() == 0.0) return Vector::Zero(v.size()).eval();
      return ((u[act].transpose() * av) / av.norm()).eval();
    };

    for (std::size_t si = 0; si < samples.size(); ++si) vals[si] = objective(samples[si]);
    const SphereMinimum sm = refine_on_sphere(samples, vals, objective, gradient, cfg);
    const double theta_j = 1.0 / sm.value;
    worst = std::max(worst, theta_j);
    worst_dense = std::max(worst_dense, 1.0 / sm.dense_value);
    out.theta_profile.emplace_back(grid.sigma(j), theta_j);
  }
  out.theta = worst;
  out.dense_theta = worst_dense;
  out.pass = out.theta < 1.0 - 1e-6;
  return out;
}

/// Window and ratio induced by expansiveness constants:
/// C = ln(2L / (1 - margin)) / beta, theta = 2 L e^{-beta C} = 1 - margin.
inline NoncriticalityConstants expansive_to_noncritical(const ExpansivenessConstants& e,
                                                        double margin) {
  if (!(e.L > 0.0) || !(e.beta > 0.0))
    throw RangeError("expansive_to_noncritical: L and beta must be positive");
  if (!(margin > 0.0 && margin < 1.0))
    throw RangeError("expansive_to_noncritical: margin must lie in (0, 1)");
  double window_c = std::log(2.0 * e.L / (1.0 - margin)) / e.beta;
  if (!(window_c > 0.0)) window_c = 1e-6 / e.beta;  // 2L already below target: any window works
  NoncriticalityConstants out;
  out.C = window_c;
  out.theta = 2.0 * e.L * std::exp(-e.beta * window_c);
  out.pass = out.theta < 1.0 - 1e-6;
  return out;
}

}  // namespace hdich
