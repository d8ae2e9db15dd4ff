#pragma once

#include <vector>

#include "hdich/errors.hpp"
#include "hdich/growth_rate.hpp"

namespace hdich {

// Finite sampling of the time axis, uniform in sigma = ln h(t). Sampling in
// sigma rather than t makes a family and its rescaled counterpart hit exactly
// the same operators, which is what turns the rescaling identities into
// executable checks.
class SigmaGrid {
 public:
  SigmaGrid(const GrowthRate& h, double sigma_min, double sigma_max, int points) {
    if (points < 2) throw RangeError("SigmaGrid: need at least 2 points");
    if (!(sigma_max > sigma_min)) throw RangeError("SigmaGrid: sigma_max must exceed sigma_min");
    sigma_min_ = sigma_min;
    sigma_max_ = sigma_max;
    step_ = (sigma_max - sigma_min) / (points - 1);
    sigmas_.reserve(points);
    ts_.reserve(points);
    for (int i = 0; i < points; ++i) {
      const double s = sigma_min + i * step_;
      sigmas_.push_back(s);
      ts_.push_back(h.inverse_exp(s));
    }
  }

  int size() const { return static_cast<int>(sigmas_.size()); }
  double sigma(int i) const { return sigmas_[i]; }
  double t(int i) const { return ts_[i]; }
  double sigma_min() const { return sigma_min_; }
  double sigma_max() const { return sigma_max_; }
  double span() const { return sigma_max_ - sigma_min_; }
  double step() const { return step_; }
  const std::vector<double>& sigmas() const { return sigmas_; }
  const std::vector<double>& ts() const { return ts_; }

 private:
  double sigma_min_ = 0, sigma_max_ = 0, step_ = 0;
  std::vector<double> sigmas_, ts_;
};

}  // namespace hdich
