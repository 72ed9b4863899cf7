#pragma once

#include <array>
#include <utility>

#include "g2flow/exterior.hpp"

namespace g2flow {

// The standard G2 3-form and its induced structures on R^7, all exact.
//
// Conventions (see tests for the frozen identities):
//  * orientation is +e^{1...7}; hodge_star uses it;
//  * the eigen-split map is T = -*( . ^ phi0), which has T^2 = T + 2 with
//    eigenvalue +2 exactly on span{alpha_i} and -1 on its complement (the
//    3-form induces the opposite orientation, and the sign is carried here);
//  * metric_from_phi divides the raw wedge by the calibration constant -6.

const ExteriorElement& phi0();
const ExteriorElement& star_phi0();

// alpha_i = v_i . phi0 (1-based)
ExteriorElement alpha(int i);

Vector7 cross(const Vector7& a, const Vector7& b);

// <a,b> from (a . phi0)^(b . phi0)^phi0, normalized to the Euclidean metric
Rational metric_from_phi(const Vector7& a, const Vector7& b);
// the raw e^{1..7} coefficient before normalization
Rational metric_from_phi_raw(const Vector7& a, const Vector7& b);
// the calibration constant (raw value on (v1,v1)); equals -6
const Rational& metric_normalization();

// trace of v -> a x (b x v) on the standard basis; equals -6<a,b>
Rational t_map_trace(const Vector7& a, const Vector7& b);

// imaginary-octonion product a.b = a x b + (1/6) tr T_{a,b}, split as
// (real part, imaginary part)
std::pair<Rational, Vector7> octonion_mul(const Vector7& a, const Vector7& b);

// full octonion product on pairs (real, imaginary)
std::pair<Rational, Vector7> octonion_mul_full(const Rational& ar, const Vector7& av,
                                               const Rational& br, const Vector7& bv);

// T eta = -*(eta ^ phi0) on 2-forms; eigenvalues {2,-1}
ExteriorElement t_map(const ExteriorElement& eta);

struct TwoFormSplit {
  ExteriorElement plus;   // T = +2 part
  ExteriorElement minus;  // T = -1 part
};

// exact spectral split: plus = (T+1)eta/3, minus = (2-T)eta/3
TwoFormSplit t_eigen_split(const ExteriorElement& eta);

// L_{*phi0}: eta -> eta ^ *phi0 (degree 2 -> 6); kernel is exactly the minus
// eigenspace. On alpha_i the exact value is 3*(-1)^(i-1)*e^{1..i^..7}.
ExteriorElement project_plus_L(const ExteriorElement& eta);

// ranks of the two spectral projectors over all 21 basis 2-forms (7 and 14)
std::pair<int, int> split_ranks();

// Kaehler -> G2 lift. Inputs are forms over the coordinate basis
// (x1,y1,x2,y2,x3,y3,theta) =: f1..f7; output is expressed in the G2 frame
// e1=dx2, e2=dx3, e3=dy2, e4=dy3, e5=dy1, e6=dtheta, e7=dx1.
struct KahlerLift {
  ExteriorElement phi;       // omega ^ dtheta + Im(Omega)
  ExteriorElement star_phi;  // (1/2) omega ^ omega - Re(Omega) ^ dtheta
};
KahlerLift lift_kahler_structure(const ExteriorElement& omega, const ExteriorElement& omega_re,
                                 const ExteriorElement& omega_im);

// the standard Kaehler data on R^6 in f-coordinates
ExteriorElement standard_omega_f();
ExteriorElement standard_Omega_re_f();
ExteriorElement standard_Omega_im_f();

// identity table behind the `algebra-selftest` subcommand
struct SelfCheck {
  std::string name;
  bool pass = false;
  std::string note;
};
std::vector<SelfCheck> algebra_selftest();

}  // namespace g2flow
