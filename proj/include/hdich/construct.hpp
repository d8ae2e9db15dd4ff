#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hdich/checkers.hpp"
#include "hdich/errors.hpp"
#include "hdich/evolution_family.hpp"
#include "hdich/growth_rate.hpp"
#include "hdich/matrix_ops.hpp"
#include "hdich/projection_family.hpp"
#include "hdich/rescale.hpp"
#include "hdich/sigma_grid.hpp"

namespace hdich {

// ============================================================================
// Constructive direction: from a noncritical ratio to dichotomy data
// ============================================================================
//
// The stable subspace is split off by the singular-value gap of a
// long-horizon transition matrix, projections are propagated from the anchor
// (so flow commutation holds by construction), the stable bound D is measured
// on the grid, and the dichotomy constants follow as B = D / theta,
// alpha = -ln(theta) / C.

/// Orthonormal bases of the stable directions S and complement Z at the
/// anchor time, with the singular-value gap as evidence.
struct SubspacePair {
  Matrix S_basis;     // n x k
  Matrix Z_basis;     // n x (n - k)
  double anchor = 0;  // time at which the split was computed
  double gap_ratio = 0;
  int stable_dim() const { return static_cast<int>(S_basis.cols()); }
};

/// Split the space by the singular values of T(t_end, anchor), where t_end
/// sits horizon_sigma above the anchor in sigma. Values below the gap mark
/// decayed (stable) right-singular directions. A missing gap means no
/// splitting is detectable at this horizon.
inline SubspacePair stable_subspace(const EvolutionFamily& family, const GrowthRate& h,
                                    double anchor, double horizon_sigma, double gap_threshold) {
  if (!(horizon_sigma > 0.0)) throw RangeError("stable_subspace: horizon must be positive");
  if (!(gap_threshold > 1.0)) throw RangeError("stable_subspace: gap threshold must exceed 1");
  const double sigma_anchor = h.log_eval(anchor);
  const double t_end = h.inverse_exp(sigma_anchor + horizon_sigma);
  const Matrix m = family(t_end, anchor);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector s = svd.singularValues();  // descending
  const int n = family.dim();

  int best_k = -1;  // stable dimension
  double best_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < n; ++i) {
    const double ratio = s(i + 1) / s(i);
    if (ratio <= 1.0 / gap_threshold && ratio < best_gap) {
      best_gap = ratio;
      best_k = n - (i + 1);
    }
  }
  // Boundary cases compare against the neutral scale 1: everything decayed,
  // or everything grew.
  if (s(0) <= 1.0 / gap_threshold && s(0) < best_gap) {
    best_gap = s(0);
    best_k = n;
  }
  if (s(n - 1) >= gap_threshold && 1.0 / s(n - 1) < best_gap) {
    best_gap = 1.0 / s(n - 1);
    best_k = 0;
  }
  if (best_k < 0)
    throw NoGapError("stable_subspace: no singular-value gap at threshold " +
                     std::to_string(gap_threshold) + " over horizon " +
                     std::to_string(horizon_sigma));

  const Matrix v = svd.matrixV();
  SubspacePair out;
  out.S_basis = v.rightCols(best_k);
  out.Z_basis = v.leftCols(n - best_k);
  out.anchor = anchor;
  out.gap_ratio = best_gap;
  return out;
}

/// P(anchor) projects onto S along Z; P(t) is propagated by conjugation.
inline ProjectionFamily build_projections(const EvolutionFamily& family,
                                          const SubspacePair& pair) {
  const int n = family.dim();
  const int k = pair.stable_dim();
  Matrix w(n, n);
  w.leftCols(k) = pair.S_basis;
  w.rightCols(n - k) = pair.Z_basis;
  if (condition_number(w) > 1e3)
    throw ConditioningError("build_projections: combined basis is badly conditioned");
  Matrix d = Matrix::Zero(n, n);
  d.topLeftCorner(k, k).setIdentity();
  const Matrix p_anchor = w * d * invert(w);
  return ProjectionFamily::propagated(family, p_anchor, pair.anchor);
}

/// D = max over grid pairs t >= s of ||T(t, s) P(s)||, clamped below by 1.
inline double uniform_stable_bound(const EvolutionFamily& family, const ProjectionFamily& proj,
                                   const SigmaGrid& grid) {
  double bound = 1.0;
  const int n = grid.size();
  std::vector<Matrix> ps(n);
  for (int j = 0; j < n; ++j) ps[j] = proj(grid.t(j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      bound = std::max(bound, operator_norm(family(grid.t(i), grid.t(j)) * ps[j]));
  return bound;
}

struct DerivedConstants {
  double B = 0.0;
  double alpha = 0.0;
  double theta = 0.0, C = 0.0, D = 0.0;  // source constants
};

/// B = theta^{-1} D and alpha = -C^{-1} ln theta; alpha > 0 iff theta < 1.
inline DerivedConstants derive_constants(double theta, double window_c, double d_bound) {
  if (!(theta > 0.0 && theta < 1.0))
    throw RangeError("derive_constants: theta must lie in (0, 1)");
  if (!(window_c > 0.0)) throw RangeError("derive_constants: C must be positive");
  if (!(d_bound >= 1.0)) throw RangeError("derive_constants: D must be >= 1");
  DerivedConstants out;
  out.theta = theta;
  out.C = window_c;
  out.D = d_bound;
  out.B = d_bound / theta;
  out.alpha = -std::log(theta) / window_c;
  return out;
}

// ============================================================================
// Equivalence pipeline
// ============================================================================

enum class Verdict { Dichotomic, NotDichotomic, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Dichotomic: return "dichotomic";
    case Verdict::NotDichotomic: return "not-dichotomic";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct PipelineConfig {
  double sigma_span = 8.0;
  int grid_points = 50;
  double horizon_sigma = 8.0;
  double gap_threshold = 100.0;
  std::vector<double> C_list{0.5, 1.0, 2.0};
  double beta = 0.0;        // <= 0: use the constructed alpha when available, else 1
  double margin = 1e-6;     // theta passes iff theta < 1 - margin
  double verify_tol = 0.0;  // <= 0: family default
  bool rescale_crosscheck = true;
  SphereSearchConfig sphere{};
};

struct ConstructOutcome {
  double D = 0.0;
  DerivedConstants derived;
  DichotomyReport reverify;
  bool growth_bound_crosscheck = false;  // D <= K e^{mu C} from the fitted growth bound
};

struct RescaleCheck {
  double theta_dev = 0.0;
  double L_dev = 0.0;
  std::string verdict;
  bool verdict_agrees = false;
};

struct PipelineReport {
  std::string system, rate;
  double a0_star = 0.0, sigma_min = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::string cause;

  GrowthBound growth, decay;

  bool subspace_ok = false;
  std::string subspace_error;
  double gap_ratio = 0.0;
  int stable_dim = -1;

  std::vector<NoncriticalityConstants> noncritical;
  std::vector<double> skipped_windows;
  double theta_best = std::numeric_limits<double>::infinity();
  double C_best = 0.0;

  ExpansivenessConstants expansive;
  double beta_used = 0.0;

  bool construct_attempted = false;
  bool construct_ok = false;
  std::string construct_error;
  ConstructOutcome constructed;

  std::optional<RescaleCheck> rescale_check;

  int exit_code() const {
    switch (verdict) {
      case Verdict::Dichotomic: return 0;
      case Verdict::NotDichotomic: return 1;
      case Verdict::Inconclusive: return 2;
    }
    return 2;
  }
};

/// Runs, in order: growth/decay fits (the standing hypotheses), the subspace
/// split, the noncriticality sweep over the window list, the expansiveness
/// estimate, the constructive chain with re-verification, and (for non-exp
/// rates) the same pipeline on the rescaled family as a cross-check. The
/// verdict is dichotomic / not-dichotomic / inconclusive; finite horizons
/// cannot certify unboundedness, hence the third option.
inline PipelineReport equivalence_pipeline(const EvolutionFamily& family, const GrowthRate& h,
                                           double a0_star, const PipelineConfig& cfg) {
  PipelineReport rep;
  rep.system = family.name();
  rep.rate = h.name();
  rep.a0_star = a0_star;
  try {
    const double s0 = h.log_eval(a0_star);
    rep.sigma_min = s0;
    const SigmaGrid grid(h, s0, s0 + cfg.sigma_span, cfg.grid_points);

    rep.growth = fit_growth_bound(family, h, grid, BoundMode::Growth);
    rep.decay = fit_growth_bound(family, h, grid, BoundMode::Decay);

    std::optional<SubspacePair> pair;
    try {
      pair = stable_subspace(family, h, a0_star, cfg.horizon_sigma, cfg.gap_threshold);
      rep.subspace_ok = true;
      rep.gap_ratio = pair->gap_ratio;
      rep.stable_dim = pair->stable_dim();
    } catch (const NoGapError& e) {
      rep.subspace_error = e.what();
    }

    for (const double c : cfg.C_list) {
      if (!(c < cfg.sigma_span)) {  // no admissible grid point for this window
        rep.skipped_windows.push_back(c);
        continue;
      }
      const auto nc = estimate_noncriticality(family, h, c, grid, cfg.sphere);
      rep.noncritical.push_back(nc);
      if (nc.theta < rep.theta_best) {
        rep.theta_best = nc.theta;
        rep.C_best = c;
      }
    }
    if (rep.noncritical.empty())
      throw EmptyRegionError("equivalence_pipeline: every window exceeds the grid span");
    const bool theta_pass = rep.theta_best < 1.0 - cfg.margin;

    rep.beta_used = cfg.beta > 0.0
                        ? cfg.beta
                        : (theta_pass ? -std::log(rep.theta_best) / rep.C_best : 1.0);
    rep.expansive = estimate_expansiveness(family, h, rep.beta_used, grid, cfg.sphere);

    if (pair && theta_pass) {
      rep.construct_attempted = true;
      try {
        const ProjectionFamily proj = build_projections(family, *pair);
        const double d_bound = uniform_stable_bound(family, proj, grid);
        const DerivedConstants derived = derive_constants(rep.theta_best, rep.C_best, d_bound);
        const DichotomyReport reverify = verify_h_dichotomy(
            family, h, proj, {derived.B, derived.alpha}, grid, cfg.verify_tol);
        rep.constructed.D = d_bound;
        rep.constructed.derived = derived;
        rep.constructed.reverify = reverify;
        rep.constructed.growth_bound_crosscheck =
            d_bound <= rep.growth.K * std::exp(rep.growth.mu * rep.C_best) + 1e-9;
        rep.construct_ok = reverify.pass;
        if (!reverify.pass) rep.construct_error = "constructed constants fail re-verification";
      } catch (const Error& e) {
        rep.construct_error = e.what();
      }
    }

    if (theta_pass) {
      if (rep.subspace_ok && rep.construct_ok) {
        rep.verdict = Verdict::Dichotomic;
      } else {
        rep.verdict = Verdict::Inconclusive;
        rep.cause = rep.subspace_ok ? "construction failed: " + rep.construct_error
                                    : "noncritical but no subspace gap: " + rep.subspace_error;
      }
    } else if (rep.theta_best >= 1.0 - 1e-9) {
      rep.verdict = Verdict::NotDichotomic;
      rep.cause = "theta >= 1 at every tested window";
    } else {
      rep.verdict = Verdict::Inconclusive;
      rep.cause = "theta inside the margin band";
    }

    if (cfg.rescale_crosscheck && h.name() != "exp") {
      PipelineConfig inner = cfg;
      inner.rescale_crosscheck = false;
      const EvolutionFamily rescaled = rescale_family(family, h);
      const PipelineReport other =
          equivalence_pipeline(rescaled, GrowthRate::exponential(), s0, inner);
      RescaleCheck rc;
      rc.theta_dev = std::abs(rep.theta_best - other.theta_best);
      rc.L_dev = std::abs(rep.expansive.L - other.expansive.L);
      rc.verdict = to_string(other.verdict);
      rc.verdict_agrees = other.verdict == rep.verdict;
      rep.rescale_check = rc;
      if (!rc.verdict_agrees) {
        rep.verdict = Verdict::Inconclusive;
        rep.cause = "rescaled run disagrees: " + rc.verdict;
      }
    }
  } catch (const Error& e) {
    rep.verdict = Verdict::Inconclusive;
    rep.cause = e.what();
  }
  return rep;
}

}  // namespace hdich
