#pragma once

#include <vector>

#include "g2flow/flow.hpp"

namespace g2flow {

// theta_H(k) = 2i tr(H^{-1} k F_H), a scalar-valued (1,1)-form per site
// (returned as a rank-1 CurvatureField)
CurvatureField theta_eval(const LatticeChart& g, const EndoField& h, const EndoField& k,
                          const CurvatureField& f);

// rho_W at H evaluated on the variation k:
// integral of theta_H(k) ^ omega^{n-1} = (n-1)! sum 2i tr(H^{-1} k F_hat) vol
double rho_eval(const LatticeChart& g, const EndoField& h, const EndoField& k,
                const HolomorphicTwist& tw);

struct QuadratureResult {
  double value = 0;
  double est_error = 0;  // |change| under the last sample doubling
  int samples = 0;
  bool converged = true;
};

// N along the geodesic-style path H0 e^{l xi}, composite Simpson with
// `samples` points (odd; refined by doubling until the change is below
// rel_tol * (1 + |N|) or max_doublings is exhausted)
QuadratureResult n_functional_geodesic(const LatticeChart& g, const HolomorphicTwist& tw,
                                       const EndoField& h0, const EndoField& h, int samples = 33,
                                       double rel_tol = 1e-6, int max_doublings = 3);

// two-leg evaluation through an intermediate metric; difference from the
// direct path measures closedness of rho
struct PathIndependence {
  double direct = 0;
  double two_leg = 0;
  double discrepancy = 0;
};
PathIndependence path_independence_check(const LatticeChart& g, const HolomorphicTwist& tw,
                                         const EndoField& h0, const EndoField& h,
                                         const EndoField& hmid, int samples = 33);

// --- slicewise functional N_{D_z} ------------------------------------------

struct ConvexitySamples {
  std::vector<double> ell;      // parameter values
  std::vector<double> m;        // cumulative functional
  std::vector<double> m1;       // first derivative (rho along the path)
  std::vector<double> m2;       // second derivative, manifestly >= 0 form
  double n_slice = 0;           // m(1)
};

// restriction to the cross-section slice at (si, ai); the path is the
// restricted geodesic
ConvexitySamples m_convexity(const LatticeChart& g, const HolomorphicTwist& tw,
                             const EndoField& h0, const EndoField& h, int si, int ai,
                             int samples = 33);

double n_slice(const LatticeChart& g, const HolomorphicTwist& tw, const EndoField& h0,
               const EndoField& h, int si, int ai, int samples = 33);

// Donaldson constant of this artifact's conventions: d/dt N = -c_n ||F_hat||^2
// with c_n = 4 (n-1)!
double donaldson_cn(int ncomplex);

}  // namespace g2flow
