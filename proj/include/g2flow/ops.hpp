#pragma once

#include <vector>

#include "g2flow/field.hpp"
#include "g2flow/twist.hpp"

namespace g2flow {

// --- real and complexified derivatives -------------------------------------
//
// Single derivatives are second-order central (one-sided second-order rows at
// the s-boundaries). Curvature and Laplacian composites pair forward with
// backward stencils and average the two orientations: the composite is then
// the compact second difference, which has no null modes at grid-scale
// frequencies (a central-central composite would make the discrete HYM
// equation degenerate there), while the orientation average restores second
// order.

enum class Stencil { central, forward, backward };

EndoField deriv_axis(const LatticeChart& g, const EndoField& f, int axis,
                     Stencil st = Stencil::central);
EndoField deriv_holo(const LatticeChart& g, const EndoField& f, int j,
                     Stencil st = Stencil::central);  // d/dw_j
EndoField deriv_anti(const LatticeChart& g, const EndoField& f, int j,
                     Stencil st = Stencil::central);  // d/dwbar_j

// twisted Dolbeault operator on endomorphism fields, (dbar_a f)_j = dbar_j f
// + [a_j, f], and its conjugate with the connection of the metric k
OneFormField dolbeault(const LatticeChart& g, const EndoField& f, const HolomorphicTwist& tw);
OneFormField dolbeault_conj(const LatticeChart& g, const EndoField& f, const HolomorphicTwist& tw,
                            const EndoField& k);

// --- whole-field matrix arithmetic (batched through the kernel layer) -----

void field_mat_mul(EndoField& out, const EndoField& a, const EndoField& b);
void field_add_scaled(EndoField& y, cdouble c, const EndoField& x);  // y += c x
EndoField field_inverse(const LatticeChart& g, const EndoField& h);  // names the site on failure
EndoField field_adjoint(const EndoField& a);

// --- Chern connection and curvature ---------------------------------------

// A_j = H^{-1} d_j H - H^{-1} a_j^dagger H, one EndoField per direction
std::vector<EndoField> chern_potential(const LatticeChart& g, const EndoField& h,
                                       const EndoField& hinv, const HolomorphicTwist& tw,
                                       Stencil st = Stencil::central);

// F_{j kbar} = d_j a_kbar - d_kbar A_j + [A_j, a_kbar], componentwise
// symmetrized in the H-adjoint pairing H^{-1} F_{j kbar}^dagger H = F_{k jbar}
CurvatureField curvature(const LatticeChart& g, const EndoField& h, const HolomorphicTwist& tw);
// same, without the symmetrization (first-variation diagnostics)
CurvatureField curvature_raw(const LatticeChart& g, const EndoField& h,
                             const HolomorphicTwist& tw);

// F_hat = Lambda F = -2i sum_j F_{j jbar}
EndoField lambda_contract(const CurvatureField& f);

// e_hat = |F_hat|^2_H = tr((i F_hat)^2), valid after symmetrization
ScalarField e_hat_field(const EndoField& fhat);
double sup_scalar(const ScalarField& f);

// Kaehler Laplacian 2i Lambda dbar_a d_K, positive spectrum (equals
// -sum d^2/dx^2 on flat untwisted scalars)
EndoField kahler_laplacian(const LatticeChart& g, const EndoField& f, const HolomorphicTwist& tw,
                           const EndoField& k);
EndoField kahler_laplacian_flat(const LatticeChart& g, const EndoField& f);

// covariant gradient squared norm per site: sum_j (|d_{K,j} f|^2 + |dbar_{a,j} f|^2)
ScalarField covariant_grad_norm2(const LatticeChart& g, const EndoField& f,
                                 const HolomorphicTwist& tw, const EndoField& k,
                                 const EndoField& kinv);

// --- diagnostics-side graph calculus (exact summation by parts) -----------

ScalarField graph_laplacian(const LatticeChart& g, const ScalarField& f);
double scalar_dot(const LatticeChart& g, const ScalarField& a, const ScalarField& b);
double grad_dot(const LatticeChart& g, const ScalarField& a, const ScalarField& b);

// --- norms -----------------------------------------------------------------

// pointwise |F|^2 with the H-metric endomorphism norm and the real-frame
// 2-form normalization (basis forms dw^dwbar have norm^2 = 4)
ScalarField curvature_norm2_field(const LatticeChart& g, const CurvatureField& f,
                                  const EndoField& h, const EndoField& hinv);
double l2_of_scalar(const LatticeChart& g, const ScalarField& f);  // sum f * cellvol

// Hodge-Riemann identity, exact pointwise in this normalization:
//   tr F^2 ^ omega^{n-2} = (|Fperp|^2 - ((n-1)!/n) |F_hat|^2) dvol
// both sides at one site, H-metric norms
void hodge_riemann_sides(int n, int r, const cdouble* fcomp, const cdouble* hmat, double* lhs,
                         double* rhs);

// the discrete charge sum of tr F^2 ^ omega^{n-2}; conserved by the continuum
// flow under Dirichlet data, drifts at O(h^2) discretely
double discrete_charge(const LatticeChart& g, const CurvatureField& f, const EndoField& h);

}  // namespace g2flow
