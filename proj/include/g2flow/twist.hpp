#pragma once

#include <cstdint>
#include <string>

#include "g2flow/field.hpp"

namespace g2flow {

// A (0,1)-form a defining dbar_a = dbar + a on the trivial rank-r bundle;
// the discrete stand-in for a holomorphic structure with exponential decay
// down the tube.
struct HolomorphicTwist {
  OneFormField a;       // (0,1) components a_{jbar}
  double decay = 1.0;   // envelope exponent: |a| <= C e^{-decay * s}
  bool zero = true;

  static HolomorphicTwist none(const LatticeChart& g, int rank);
  // a = dbar(f) * M, one Hermitian traceless direction M: discretely
  // integrable to rounding (mixed central differences commute, a^a = 0)
  static HolomorphicTwist exact(const LatticeChart& g, int rank, uint64_t seed, double amp,
                                double decay = 1.0);
  // a = g^{-1} dbar g, g = exp(chi) with chi a smooth random decaying field:
  // integrable at discretization order, genuinely nonabelian for rank >= 2
  static HolomorphicTwist gauge(const LatticeChart& g, int rank, uint64_t seed, double amp,
                                double decay = 1.0);

  // || dbar a + a ^ a || (max over sites and component pairs)
  double integrability_residual(const LatticeChart& g) const;
  // max over sites of |a| e^{decay * s}
  double envelope_constant(const LatticeChart& g) const;
};

}  // namespace g2flow
