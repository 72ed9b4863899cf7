#pragma once

#include <vector>

#include "g2flow/flow.hpp"
#include "g2flow/g2_numeric.hpp"

namespace g2flow {

// Chern-Weil energy accounting on the 7-frame lift plus the Kaehler-side
// Hodge-Riemann identity.
struct EnergyReport {
  double kappa = 0;
  double norm_plus2 = 0;
  double norm_minus2 = 0;
  double ym = 0;
  double energy = 0;  // E(t) relative to the reference curvature
  double hodge_riemann_residual = 0;
  double ym_split_residual = 0;
};

// max relative pointwise Hodge-Riemann residual over a field (the two-sided
// identity itself lives in the ops layer)
double hodge_riemann_residual(const LatticeChart& g, const CurvatureField& f, const EndoField& h);

// 7-frame lift of a lattice curvature snapshot: per-site unitary-frame
// conjugation by H^{1/2}, embedding, and volume-weighted Chern-Weil report
EnergyReport chern_weil_lattice(const LatticeChart& g, const CurvatureField& f, const EndoField& h);

// E(t) series recomputed from snapshots
std::vector<double> energy_series(const LatticeChart& g, const HolomorphicTwist& tw,
                                  const std::vector<EndoField>& snapshots);

}  // namespace g2flow
