#include "g2flow/g2.hpp"

#include <stdexcept>

namespace g2flow {

const ExteriorElement& phi0() {
  static const ExteriorElement p = [] {
    using E = ExteriorElement;
    // (e12 - e34)^e5 + (e13 - e42)^e6 + (e14 - e23)^e7 + e567
    ExteriorElement r = E::basis({1, 2, 5}) - E::basis({3, 4, 5});
    r = r + E::basis({1, 3, 6}) - E::basis({4, 2, 6});
    r = r + E::basis({1, 4, 7}) - E::basis({2, 3, 7});
    r = r + E::basis({5, 6, 7});
    return r;
  }();
  return p;
}

const ExteriorElement& star_phi0() {
  static const ExteriorElement p = [] {
    using E = ExteriorElement;
    // (e34 - e12)^e67 + (e42 - e13)^e75 + (e23 - e14)^e56 + e1234
    ExteriorElement r = E::basis({3, 4, 6, 7}) - E::basis({1, 2, 6, 7});
    r = r + E::basis({4, 2, 7, 5}) - E::basis({1, 3, 7, 5});
    r = r + E::basis({2, 3, 5, 6}) - E::basis({1, 4, 5, 6});
    r = r + E::basis({1, 2, 3, 4});
    return r;
  }();
  return p;
}

ExteriorElement alpha(int i) { return contract(Vector7::basis(i), phi0()); }

Vector7 cross(const Vector7& a, const Vector7& b) {
  // phi0(a,b,.) = (a x b)^*; the Euclidean dual of a 1-form is componentwise
  ExteriorElement one_form = contract(b, contract(a, phi0()));
  Vector7 r;
  for (int i = 0; i < 7; ++i) r.c[i] = one_form.coeff(static_cast<uint8_t>(1u << i));
  return r;
}

Rational metric_from_phi_raw(const Vector7& a, const Vector7& b) {
  ExteriorElement w = wedge(wedge(contract(a, phi0()), contract(b, phi0())), phi0());
  return w.coeff(0x7f);
}

const Rational& metric_normalization() {
  static const Rational c = metric_from_phi_raw(Vector7::basis(1), Vector7::basis(1));
  return c;
}

Rational metric_from_phi(const Vector7& a, const Vector7& b) {
  return metric_from_phi_raw(a, b) / metric_normalization();
}

Rational t_map_trace(const Vector7& a, const Vector7& b) {
  Rational tr(0);
  for (int k = 1; k <= 7; ++k) {
    Vector7 w = cross(a, cross(b, Vector7::basis(k)));
    tr += w.c[k - 1];
  }
  return tr;
}

std::pair<Rational, Vector7> octonion_mul(const Vector7& a, const Vector7& b) {
  Rational re = Rational(BigInt(1), BigInt(6)) * t_map_trace(a, b);
  return {re, cross(a, b)};
}

std::pair<Rational, Vector7> octonion_mul_full(const Rational& ar, const Vector7& av,
                                               const Rational& br, const Vector7& bv) {
  // (s,u).(t,v) = (st - <u,v>, sv + tu + u x v)
  Rational re = ar * br - metric_from_phi(av, bv);
  Vector7 im = ar * bv + br * av + cross(av, bv);
  return {re, im};
}

ExteriorElement t_map(const ExteriorElement& eta) {
  return -hodge_star(wedge(eta, phi0()));
}

TwoFormSplit t_eigen_split(const ExteriorElement& eta) {
  if (!eta.is_zero() && eta.degree() != 2)
    throw std::invalid_argument("t_eigen_split: degree-2 input required");
  ExteriorElement t = t_map(eta);
  Rational third(BigInt(1), BigInt(3));
  TwoFormSplit s;
  s.plus = third * (t + eta);
  s.minus = third * (Rational(2) * eta - t);
  return s;
}

ExteriorElement project_plus_L(const ExteriorElement& eta) { return wedge(eta, star_phi0()); }

std::pair<int, int> split_ranks() {
  // exact rank of the plus projector on the 21 basis 2-forms by Gaussian
  // elimination over Q; the minus rank is 21 - rank(plus) only if the split
  // is exact, so both are computed independently.
  std::vector<uint8_t> basis_masks;
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j)
      basis_masks.push_back(static_cast<uint8_t>((1u << i) | (1u << j)));

  auto rank_of = [&](bool plus) {
    std::vector<std::vector<Rational>> rows;
    for (uint8_t m : basis_masks) {
      ExteriorElement e;
      e.set(m, Rational(1));
      TwoFormSplit s = t_eigen_split(e);
      const ExteriorElement& p = plus ? s.plus : s.minus;
      std::vector<Rational> row(21, Rational(0));
      for (size_t k = 0; k < basis_masks.size(); ++k) row[k] = p.coeff(basis_masks[k]);
      rows.push_back(std::move(row));
    }
    int rank = 0;
    size_t col = 0;
    for (; col < 21 && rank < static_cast<int>(rows.size()); ++col) {
      int pivot = -1;
      for (size_t r = rank; r < rows.size(); ++r)
        if (!rows[r][col].is_zero()) {
          pivot = static_cast<int>(r);
          break;
        }
      if (pivot < 0) continue;
      std::swap(rows[rank], rows[pivot]);
      for (size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<int>(r) == rank || rows[r][col].is_zero()) continue;
        Rational f = rows[r][col] / rows[rank][col];
        for (size_t k = col; k < 21; ++k) rows[r][k] -= f * rows[rank][k];
      }
      ++rank;
    }
    return rank;
  };
  return {rank_of(true), rank_of(false)};
}

KahlerLift lift_kahler_structure(const ExteriorElement& omega, const ExteriorElement& omega_re,
                                 const ExteriorElement& omega_im) {
  // f-coordinates: f1=x1, f2=y1, f3=x2, f4=y2, f5=x3, f6=y3, f7=theta
  // frame: e1=dx2, e2=dx3, e3=dy2, e4=dy3, e5=dy1, e6=dtheta, e7=dx1
  static const std::array<int, 7> f_to_e = {7, 5, 1, 3, 2, 4, 6};
  ExteriorElement dtheta = ExteriorElement::basis({7});
  Rational half(BigInt(1), BigInt(2));
  KahlerLift lift;
  lift.phi = substitute_indices(wedge(omega, dtheta) + omega_im, f_to_e);
  lift.star_phi =
      substitute_indices(half * wedge(omega, omega) - wedge(omega_re, dtheta), f_to_e);
  return lift;
}

ExteriorElement standard_omega_f() {
  using E = ExteriorElement;
  return E::basis({1, 2}) + E::basis({3, 4}) + E::basis({5, 6});
}

ExteriorElement standard_Omega_re_f() {
  using E = ExteriorElement;
  // Re[(dx1+i dy1)(dx2+i dy2)(dx3+i dy3)]
  return E::basis({1, 3, 5}) - E::basis({1, 4, 6}) - E::basis({2, 3, 6}) - E::basis({2, 4, 5});
}

ExteriorElement standard_Omega_im_f() {
  using E = ExteriorElement;
  return E::basis({2, 3, 5}) + E::basis({1, 4, 5}) + E::basis({1, 3, 6}) - E::basis({2, 4, 6});
}

}  // namespace g2flow
