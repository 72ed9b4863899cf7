#pragma once

#include <cstdint>
#include <vector>

#include "g2flow/flow.hpp"

namespace g2flow {

// --- weak Laplacian bound ----------------------------------------------------

struct WeakBetaReport {
  double beta = 0;            // 2 (sup_t ||F_hat_t|| + ||F_hat_0||), L1 norms over W
  int bank_size = 0;
  int bank_violations = 0;
  double worst_ratio = 0;     // max over bumps of (integral) / (beta ||phi||_inf)
};

// beta from the L1 norms of |F_hat| over a run (the distributional pairing
// integrates the pointwise bound, so the L1 norm is the coherent constant);
// the bump bank verifies integral(lambda_bar * Delta phi) <= beta ||phi||_C0
WeakBetaReport weak_laplacian_beta(const LatticeChart& g,
                                   const std::vector<ScalarField>& lambda_fields,
                                   const std::vector<double>& fhat_l1_series, uint64_t seed,
                                   int nbumps = 16);

// ||F_hat||_{L1(W)} of a snapshot (sum of pointwise endo norms)
double fhat_l1_norm(const LatticeChart& g, const EndoField& h, const HolomorphicTwist& tw);

// --- parabola lower bound ----------------------------------------------------

struct ParabolaReport {
  double L = 0;            // sup lambda-bar of the snapshot
  int s_index = 0;         // furthest slice attaining L
  double S = 0;
  double delta_plus = 0;   // (1/2)(sqrt(1 + 8(1-eps)L/beta) - 1)
  double beta = 0, eps = 0;
  int checked = 0;
  int violations = 0;      // slices in I with ell < P - 1e-8
  int eps_violations = 0;  // slices in I_eps with ell < eps L - 1e-8
  bool vacuous = false;    // L below noise
};

ParabolaReport parabola_check(const LatticeChart& g, const std::vector<double>& ell_profile,
                              double beta, double eps = 0.0);

// --- Moser slab estimate -------------------------------------------------------

struct MoserReport {
  double lhs = 0;       // integral over the slab of lambda-bar^{1+x}
  double rhs = 0;       // k_{eps,x} delta+ L^{1+x}
  double k_eps_x = 0;   // pi k' eps^{1+x} Vol(D)
  double k_prime = 0;
  double delta_plus = 0;
  double L = 0;
  bool vacuous = false;
  bool pass = false;
  double margin = 0;  // lhs/rhs - 1
};

MoserReport moser_slab_check(const LatticeChart& g, const ScalarField& lambda_field,
                             const std::vector<double>& ell_profile, double beta, double eps,
                             double x, double k_prime_frozen);

// measured Moser constant: min over unit cylinders B_s (length 1/(2pi), half
// torus box around the slice argmax) of avg(lambda^{1+x}) / (max_B lambda)^{1+x}
double measure_moser_kprime(const LatticeChart& g, const ScalarField& lambda_field,
                            const std::vector<double>& ell_profile, double beta, double eps,
                            double x);

// --- Hoelder interpolation -----------------------------------------------------

struct LpReport {
  double lhs = 0;  // ||f||_p
  double rhs = 0;  // (k_p / F^x) ||f^{1+x}||_1
  double k_p = 0;
  bool pass = false;
};

// exact-constant inequality ||f||_p >= (k_p / F^x) ||f^{1+x}||_1 with
// k_p = Vol(D)^{1/p - 1} on a cross-section chart
LpReport lp_interpolation_check(const LatticeChart& torus, const ScalarField& f, double p,
                                double x);

// --- the Claim's integrated lower bound ----------------------------------------

struct ClaimReport {
  double beta = 0, eps = 0.5, x = 1.0;
  double L = 0, S = 0, delta_plus_eps = 0;
  double mu_A = 0;         // ds^dalpha measure of A = I_eps x S^1
  double slab_energy = 0;  // integral over A of ||F_hat restricted||^2_{L2(D_z)}
  double k_prime = 0, k_p43 = 0, k_dblprime = 0, k_half_one = 0;
  double c = 0, c_prime = 0, c_dblprime = 0, c_z = 0;
  double rhs = 0;    // (c/2) mu(A) (1 - c'/L)^2
  double ratio = 0;  // slab_energy / rhs
  double mu_over_sqrt_l = 0;
  int parabola_violations = 0;
  bool vacuous = false;
};

ClaimReport claim_lower_bound(const LatticeChart& g, const HolomorphicTwist& tw,
                              const EndoField& h0, const EndoField& h_t, double beta,
                              double eps = 0.5, double x = 1.0);

// --- weak maximum principle -----------------------------------------------------

struct WeakMaxReport {
  double interior_max = 0;
  double boundary_max = 0;
  double relax_residual = 0;
  bool pass = false;
};

// discrete-harmonic extension of random boundary data on a sub-box; the
// interior max must not exceed the boundary max
WeakMaxReport weak_max_principle_check(const LatticeChart& g, uint64_t seed, int box = 6,
                                       int iters = 20000);

}  // namespace g2flow
