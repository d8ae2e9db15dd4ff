#pragma once

#include "hdich/errors.hpp"
#include "hdich/evolution_family.hpp"
#include "hdich/growth_rate.hpp"

namespace hdich {

// ============================================================================
// Time rescaling
// ============================================================================
//
// T_h(t, s) := T(h^{-1}(e^t), h^{-1}(e^s)) turns an h-graded family into an
// exponentially graded one: every h-relative bound on T becomes the same
// bound with h = exp on T_h, and T(t, s) = T_h(ln h(t), ln h(s)) recovers the
// original family. The wrapper composes lazily with the base transition (no
// re-integration), so the correspondence holds to round-off.

/// The rescaled family T_h. Defined for all real sigma pairs whose preimages
/// lie in the base family's domain, hence a0 = -inf.
inline EvolutionFamily rescale_family(const EvolutionFamily& base, const GrowthRate& h) {
  if (!(base.a0() == h.a0()))
    throw DomainError("rescale_family: family and rate have different left endpoints");
  return EvolutionFamily(
      "rescaled(" + base.name() + "," + h.name() + ")", base.dim(), kNegInf,
      FamilyKind::Rescaled,
      [base, h](double sigma_t, double sigma_s) {
        return base(h.inverse_exp(sigma_t), h.inverse_exp(sigma_s));
      },
      base.native_tol());
}

}  // namespace hdich
