#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hdich/errors.hpp"

namespace hdich {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ============================================================================
// Growth rates
// ============================================================================
//
// A growth rate is a bijective increasing map h : (a0, inf) -> (0, inf),
// a0 in R u {-inf}. It fixes the scale on which transitions contract or
// expand; h(t) = e^t recovers the classical exponential theory.
//
// Besides h and h^{-1}, the class carries ln h and h^{-1} o exp natively so
// that sigma-coordinate work (sigma = ln h(t)) avoids exp/log round trips.
// When no closed inverse is supplied, inversion falls back to monotone
// bisection with an expanding bracket (relative tolerance ~1e-15, which keeps
// the forward round trip within 1e-12).

class GrowthRate {
 public:
  using Fn = std::function<double(double)>;

  GrowthRate(std::string name, double a0, Fn eval, Fn inverse = nullptr,
             Fn log_eval = nullptr, Fn inverse_exp = nullptr, Fn log_deriv = nullptr)
      : name_(std::move(name)),
        a0_(a0),
        eval_(std::move(eval)),
        inverse_(std::move(inverse)),
        log_eval_(std::move(log_eval)),
        inverse_exp_(std::move(inverse_exp)),
        log_deriv_(std::move(log_deriv)) {}

  /// h(t) = e^t on (-inf, inf).
  static GrowthRate exponential() {
    return GrowthRate(
        "exp", kNegInf,
        [](double t) { return std::exp(t); },
        [](double y) { return std::log(y); },
        [](double t) { return t; },
        [](double s) { return s; },
        [](double) { return 1.0; });
  }

  /// h(t) = t^p on (0, inf), p > 0. Degree 1 is the plain polynomial rate.
  static GrowthRate polynomial(double degree = 1.0) {
    if (!(degree > 0.0)) throw RangeError("GrowthRate::polynomial: degree must be positive");
    const double p = degree;
    std::string name = (p == 1.0) ? "poly" : "poly(" + std::to_string(p) + ")";
    return GrowthRate(
        std::move(name), 0.0,
        [p](double t) { return p == 1.0 ? t : std::pow(t, p); },
        [p](double y) { return p == 1.0 ? y : std::pow(y, 1.0 / p); },
        [p](double t) { return p * std::log(t); },
        [p](double s) { return std::exp(s / p); },
        [p](double t) { return p / t; });
  }

  /// h(t) = ln t on (1, inf).
  static GrowthRate logarithmic() {
    return GrowthRate(
        "log", 1.0,
        [](double t) { return std::log(t); },
        [](double y) { return std::exp(y); },
        [](double t) { return std::log(std::log(t)); },
        [](double s) { return std::exp(std::exp(s)); },
        [](double t) { return 1.0 / (t * std::log(t)); });
  }

  /// Rate given only by a forward map; inverse by expanding-bracket bisection.
  static GrowthRate from_function(std::string name, double a0, Fn eval, Fn inverse = nullptr) {
    return GrowthRate(std::move(name), a0, std::move(eval), std::move(inverse));
  }

  /// Strictly increasing (t, h(t)) table, interpolated piecewise linearly in
  /// (t, ln h) with end-slope extrapolation; inverse by bisection.
  static GrowthRate from_table(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 2) throw ConfigError("GrowthRate::from_table: need at least 2 samples");
    std::vector<double> ts, lh;
    ts.reserve(samples.size());
    lh.reserve(samples.size());
    for (const auto& [t, ht] : samples) {
      if (!(ht > 0.0)) throw ConfigError("GrowthRate::from_table: h values must be positive");
      if (!ts.empty() && !(t > ts.back() && std::log(ht) > lh.back()))
        throw ConfigError("GrowthRate::from_table: samples must be strictly increasing in t and h");
      ts.push_back(t);
      lh.push_back(std::log(ht));
    }
    auto interp = [ts, lh](double t) {
      std::size_t hi = std::upper_bound(ts.begin(), ts.end(), t) - ts.begin();
      hi = std::clamp<std::size_t>(hi, 1, ts.size() - 1);
      const std::size_t lo = hi - 1;
      const double slope = (lh[hi] - lh[lo]) / (ts[hi] - ts[lo]);
      return lh[lo] + slope * (t - ts[lo]);
    };
    return GrowthRate(
        "table", kNegInf,
        [interp](double t) { return std::exp(interp(t)); },
        nullptr,
        interp);
  }

  const std::string& name() const { return name_; }
  double a0() const { return a0_; }

  /// h(t).
  double eval(double t) const {
    check_domain(t);
    return eval_(t);
  }

  /// ln h(t), evaluated natively when the rate provides it.
  double log_eval(double t) const {
    check_domain(t);
    return log_eval_ ? log_eval_(t) : std::log(eval_(t));
  }

  /// h^{-1}(y) for y > 0.
  double inverse(double y) const {
    if (!(y > 0.0)) throw DomainError("GrowthRate::inverse: argument must be positive");
    return inverse_ ? inverse_(y) : bisect_inverse(y);
  }

  /// h^{-1}(e^sigma); the preimage of the sigma coordinate.
  double inverse_exp(double sigma) const {
    double t;
    if (inverse_exp_) {
      t = inverse_exp_(sigma);
    } else {
      const double y = std::exp(sigma);
      if (!std::isfinite(y)) throw NumericalError("GrowthRate::inverse_exp: e^sigma overflows");
      t = inverse(y);
    }
    if (!std::isfinite(t)) throw NumericalError("GrowthRate::inverse_exp: preimage is not representable");
    return t;
  }

  bool has_log_deriv() const { return static_cast<bool>(log_deriv_); }

  /// h'(t)/h(t); available for the differentiable builtins only.
  double log_deriv(double t) const {
    check_domain(t);
    if (!log_deriv_) throw RangeError("GrowthRate::log_deriv: rate has no derivative information");
    return log_deriv_(t);
  }

 private:
  void check_domain(double t) const {
    if (!(t > a0_)) throw DomainError("GrowthRate: argument outside (a0, inf)");
  }

  double bisect_inverse(double y) const {
    // Expanding bracket around a starting point, then plain bisection.
    double lo, hi;
    const double t0 = std::isfinite(a0_) ? a0_ + 1.0 : 0.0;
    const double f0 = eval_(t0);
    if (f0 < y) {
      lo = t0;
      hi = t0;
      double step = 1.0;
      bool bracketed = false;
      for (int i = 0; i < 200; ++i) {
        lo = hi;
        hi += step;
        step *= 2.0;
        const double f = eval_(hi);
        if (!(f < y)) {  // also stops on overflow to +inf
          bracketed = true;
          break;
        }
      }
      if (!bracketed) throw ConvergenceError("GrowthRate::inverse: bracket exhaustion above");
    } else {
      hi = t0;
      lo = t0;
      bool bracketed = false;
      if (std::isfinite(a0_)) {
        double gap = 1.0;
        for (int i = 0; i < 200; ++i) {
          gap *= 0.5;
          hi = lo;
          lo = a0_ + gap;
          if (eval_(lo) <= y) {
            bracketed = true;
            break;
          }
        }
      } else {
        double step = 1.0;
        for (int i = 0; i < 200; ++i) {
          hi = lo;
          lo -= step;
          step *= 2.0;
          if (eval_(lo) <= y) {
            bracketed = true;
            break;
          }
        }
      }
      if (!bracketed) throw ConvergenceError("GrowthRate::inverse: bracket exhaustion below");
    }
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (eval_(mid) < y)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  std::string name_;
  double a0_;
  Fn eval_, inverse_, log_eval_, inverse_exp_, log_deriv_;
};

/// sigma = ln h(t).
inline double sigma_of_t(const GrowthRate& h, double t) { return h.log_eval(t); }

/// t = h^{-1}(e^sigma).
inline double t_of_sigma(const GrowthRate& h, double sigma) { return h.inverse_exp(sigma); }

}  // namespace hdich
