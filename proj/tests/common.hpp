#pragma once

// Shared fixtures for the checker tests: the reference system/rate matrix and
// the paired grids used by the rescaling agreement checks.

#include <utility>
#include <vector>

#include "hdich/growth_rate.hpp"
#include "hdich/rescale.hpp"
#include "hdich/sigma_grid.hpp"
#include "hdich/sphere_search.hpp"
#include "hdich/systems.hpp"

namespace common {

using namespace hdich;

inline std::vector<GrowthRate> rates() {
  return {GrowthRate::exponential(), GrowthRate::polynomial(), GrowthRate::logarithmic()};
}

inline double span_for(const GrowthRate& h) { return h.name() == "log" ? 1.5 : 6.0; }

inline std::vector<EvolutionFamily> families(const GrowthRate& h) {
  return {systems::scalar_stable(h, 1.0), systems::diagonal_hyperbolic(h, 1.0),
          systems::rotation(h, 1.0), systems::neutral(h, 1.0)};
}

struct MetamorphicPair {
  EvolutionFamily direct;
  GrowthRate h;
  SigmaGrid grid;           // grid for (direct, h)
  EvolutionFamily rescaled;
  GrowthRate exp_rate;
  SigmaGrid sigma_grid;     // corresponding grid for (rescaled, exp)
};

inline MetamorphicPair metamorphic_pair(const EvolutionFamily& f, const GrowthRate& h,
                                        int points = 16) {
  const double span = span_for(h);
  return MetamorphicPair{f,
                         h,
                         SigmaGrid(h, 0.0, span, points),
                         rescale_family(f, h),
                         GrowthRate::exponential(),
                         SigmaGrid(GrowthRate::exponential(), 0.0, span, points)};
}

inline SphereSearchConfig fast_sphere(std::uint64_t seed = 0) {
  SphereSearchConfig sc;
  sc.dense_samples = 1024;
  sc.seed = seed;
  return sc;
}

}  // namespace common
