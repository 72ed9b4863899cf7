#pragma once

#include <optional>
#include <string>
#include <vector>

#include "g2flow/ops.hpp"

namespace g2flow {

struct FlowConfig {
  double dt = 0.0;        // 0: safety * h_min^2
  double safety = 0.05;   // CFL fraction, in (0,1]
  double t_end = 1.0;
  bool det1 = false;      // project the update exponent to traceless
  int monitor_every = 10; // steps between trace samples
  double target_sup_e = 1e-10;
  double divergence_factor = 10.0;
  bool keep_snapshots = true;
  bool track_energy = true;
};

struct FlowSample {
  double t = 0;
  double sup_e = 0;
  double sup_sigma = 0;
  double l_t = 0;        // sup lambda-bar
  double energy = 0;     // E(t), corrected for the discrete charge drift
  double energy_raw = 0; // ||F_t||^2 - ||F_0||^2 as summed
  double charge = 0;     // discrete sum of tr F^2 ^ omega^{n-2}
  double n_flow = 0;     // cumulative flow-path functional integral
  double fhat_l2sq = 0;  // ||F_hat||^2_{L^2}
  std::vector<double> ell_lambda;  // slicewise sup lambda-bar (cylinder runs)
  std::vector<double> ell_e;       // slicewise sup e-hat
};

struct FlowTrace {
  std::vector<FlowSample> samples;
  std::vector<EndoField> snapshots;
  std::vector<double> snapshot_times;
  bool converged = false;
  bool diverged = false;
  std::string abort_reason;
  int steps = 0;
  double dt = 0;
};

// current flow state with cached curvature data
struct FlowState {
  const LatticeChart* geom = nullptr;
  const HolomorphicTwist* twist = nullptr;
  EndoField H, H0;
  double t = 0;

  CurvatureField F;
  EndoField Fhat;
  ScalarField ehat;
  bool cache_valid = false;

  void refresh();  // recompute curvature cache
};

FlowState make_flow_state(const LatticeChart& g, const HolomorphicTwist& tw, const EndoField& h0);

// one exponential-integrator step H <- H exp(-2i F_hat dt), Dirichlet slices
// re-pinned bit for bit; throws on CFL violation or non-finite data
void flow_step(FlowState& st, double dt, const FlowConfig& cfg);

FlowTrace flow_run(const LatticeChart& g, const HolomorphicTwist& tw, const EndoField& h0,
                   const FlowConfig& cfg);

// Reference metric: on cylinder charts, solves the slicewise cross-section
// HYM problem from the identity (each slice flowed until sup e-hat on the
// slice is below slice_tol), so the restriction of H0 to every slice is HYM
// to rounding. On pure-torus charts returns the identity.
EndoField make_reference_metric(const LatticeChart& g, const HolomorphicTwist& tw, int rank,
                                double slice_tol = 1e-22, int max_steps = 200000);

// restriction of a twist to the cross-section of one (s, alpha) slice
HolomorphicTwist slice_twist(const LatticeChart& g, const HolomorphicTwist& tw, int si, int ai);

// --- metric distances -------------------------------------------------------

ScalarField sigma_field(const LatticeChart& g, const EndoField& h, const EndoField& k);
double sup_sigma(const LatticeChart& g, const EndoField& h, const EndoField& k);

ScalarField lambda_bar_field(const EndoField& h, const EndoField& h0);
// xi = log(H0^{-1} H), the H0-self-adjoint logarithm
EndoField log_relative(const EndoField& h, const EndoField& h0);

// --- monitors ---------------------------------------------------------------

struct MonitorReport {
  bool sup_e_monotone = true;
  bool sigma_monotone = true;
  bool positivity_ok = true;
  bool hermiticity_ok = true;
  bool dirichlet_ok = true;
  bool det1_ok = true;
  double worst_e_increase = 0;
  double worst_sigma_increase = 0;
  std::vector<std::string> violations;
  bool pass() const {
    return sup_e_monotone && sigma_monotone && positivity_ok && hermiticity_ok && dirichlet_ok &&
           det1_ok;
  }
};

// verifies sup e-hat and sup sigma(H_t, H_{t+tau}) monotonicity over the
// stored snapshots, within 1e-8 + mono_c * dt
MonitorReport monitor_max_principles(const LatticeChart& g, const FlowTrace& trace,
                                     const EndoField& h0, double mono_c = 1.0, bool det1 = false);

// --- decay diagnostics ------------------------------------------------------

struct DecayProfile {
  bool degenerate = false;  // all-zero profile: converged, no rate
  double slope = 0;         // least-squares slope of log sup_slice e-hat vs s
  double intercept = 0;
  int pointwise_violations = 0;  // sites with e_t > B e^{t-s}
  double bound_b = 0;            // B = sup e-hat at t=0
};

DecayProfile decay_profile(const LatticeChart& g, const ScalarField& ehat_t, double t, double B);

// --- a-priori Laplacian bound ------------------------------------------------

struct LaplacianBoundReport {
  double max_ratio = 0;  // max over sites of LHS/RHS
  double frozen_constant = 0;
  bool ok = false;
};

// || Delta_K H || <= cst [ (||F_hat_H|| + 1) ||H|| + ||grad_K H||^2 ||H^{-1}|| ]
LaplacianBoundReport laplacian_bound_check(const LatticeChart& g, const EndoField& h,
                                           const EndoField& k, const HolomorphicTwist& tw,
                                           double frozen_constant);

}  // namespace g2flow
