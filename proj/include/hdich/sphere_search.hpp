#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "hdich/matrix_ops.hpp"

namespace hdich {

// Extremal quantities over the unit sphere (norm-ratio suprema) have no
// closed form in general; they are estimated by dense quasi-uniform sampling
// followed by projected-gradient polish from the best samples. Everything is
// deterministic given (dim, samples, seed).

struct SphereSearchConfig {
  int dense_samples = 10000;
  int restarts = 8;
  int refine_iters = 150;
  std::uint64_t seed = 0;
};

struct SphereMinimum {
  Vector arg;
  double value = 0.0;
  double dense_value = 0.0;  // before refinement; refinement only improves
};

namespace detail {

inline std::vector<Vector> sphere_samples(int dim, const SphereSearchConfig& cfg) {
  std::vector<Vector> pts;
  if (dim == 1) {
    pts.push_back(Vector::Constant(1, 1.0));
    pts.push_back(Vector::Constant(1, -1.0));
    return pts;
  }
  const int n = std::max(2, cfg.dense_samples);
  std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 0x51a9b2c3 + dim);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  pts.reserve(n);
  if (dim == 2) {
    const double offset = unif(rng);
    for (int k = 0; k < n; ++k) {
      const double phi = 2.0 * std::numbers::pi * (k + offset) / n;
      Vector v(2);
      v << std::cos(phi), std::sin(phi);
      pts.push_back(std::move(v));
    }
  } else if (dim == 3) {
    // Fibonacci spiral
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const double offset = unif(rng) * 2.0 * std::numbers::pi;
    for (int k = 0; k < n; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = k * golden + offset;
      Vector v(3);
      v << r * std::cos(phi), r * std::sin(phi), z;
      pts.push_back(std::move(v));
    }
  } else {
    std::normal_distribution<double> normal(0.0, 1.0);
    while (static_cast<int>(pts.size()) < n) {
      Vector v(dim);
      for (int i = 0; i < dim; ++i) v(i) = normal(rng);
      const double nn = v.norm();
      if (nn > 1e-12) pts.push_back(v / nn);
    }
  }
  return pts;
}

}  // namespace detail

/// Projected-gradient polish starting from the best precomputed samples.
/// Only improving steps are accepted, so value <= dense_value always.
inline SphereMinimum refine_on_sphere(const std::vector<Vector>& pts,
                                      const std::vector<double>& vals,
                                      const std::function<double(const Vector&)>& f,
                                      const std::function<Vector(const Vector&)>& grad,
                                      const SphereSearchConfig& cfg) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] < vals[best]) best = i;
  SphereMinimum out;
  out.arg = pts[best];
  out.value = vals[best];
  out.dense_value = vals[best];
  if (!grad || pts[best].size() == 1) return out;

  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t nstarts = std::min<std::size_t>(cfg.restarts, order.size());
  std::partial_sort(order.begin(), order.begin() + nstarts, order.end(),
                    [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });

  for (std::size_t si = 0; si < nstarts; ++si) {
    Vector x = pts[order[si]];
    double fx = vals[order[si]];
    double eta = 0.5;
    for (int iter = 0; iter < cfg.refine_iters; ++iter) {
      Vector g = grad(x);
      Vector gt = g - g.dot(x) * x;  // tangential component
      if (gt.norm() < 1e-14) break;
      double step = eta;
      bool improved = false;
      for (int bt = 0; bt < 40; ++bt) {
        Vector cand = (x - step * gt).normalized();
        const double fc = f(cand);
        if (fc < fx) {
          x = std::move(cand);
          fx = fc;
          improved = true;
          eta = std::min(0.5, step * 2.0);
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (fx < out.value) {
      out.value = fx;
      out.arg = x;
    }
  }
  return out;
}

/// Minimize f over the unit sphere: dense sampling plus polish. `grad`
/// supplies a (sub)gradient; pass nullptr to keep the dense minimum.
inline SphereMinimum minimize_on_sphere(int dim,
                                        const std::function<double(const Vector&)>& f,
                                        const std::function<Vector(const Vector&)>& grad,
                                        const SphereSearchConfig& cfg) {
  const auto pts = detail::sphere_samples(dim, cfg);
  std::vector<double> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);
  return refine_on_sphere(pts, vals, f, grad, cfg);
}

}  // namespace hdich
