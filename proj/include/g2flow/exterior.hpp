#pragma once

#include <array>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "g2flow/bigint.hpp"

namespace g2flow {

// Multivector in Lambda^*(R^7)^* with exact rational coefficients. A basis
// p-form e^{i1...ip} (indices strictly increasing, 1-based) is stored as the
// bitmask with bits i-1 set; zero coefficients are never stored.
class ExteriorElement {
 public:
  ExteriorElement() = default;

  static ExteriorElement basis(std::initializer_list<int> idx, Rational coeff = Rational(1));
  static ExteriorElement scalar(Rational c);

  bool is_zero() const { return terms_.empty(); }
  // degree of a homogeneous element; throws for mixed degrees, returns 0 for 0
  int degree() const;
  bool is_homogeneous() const;

  const std::map<uint8_t, Rational>& terms() const { return terms_; }
  Rational coeff(uint8_t mask) const;
  void set(uint8_t mask, const Rational& c);  // erases on zero

  friend ExteriorElement operator+(const ExteriorElement& a, const ExteriorElement& b);
  friend ExteriorElement operator-(const ExteriorElement& a, const ExteriorElement& b);
  friend ExteriorElement operator*(const Rational& c, const ExteriorElement& a);
  ExteriorElement operator-() const;
  friend bool operator==(const ExteriorElement& a, const ExteriorElement& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const ExteriorElement& a, const ExteriorElement& b) { return !(a == b); }

  std::string to_string() const;

 private:
  std::map<uint8_t, Rational> terms_;
};

struct Vector7 {
  std::array<Rational, 7> c{};  // components in the standard basis v_1..v_7

  static Vector7 basis(int i);  // 1-based
  friend Vector7 operator+(const Vector7& a, const Vector7& b);
  friend Vector7 operator-(const Vector7& a, const Vector7& b);
  friend Vector7 operator*(const Rational& s, const Vector7& a);
  friend bool operator==(const Vector7& a, const Vector7& b) { return a.c == b.c; }
  bool is_zero() const;
};

// sign of sorting the concatenation of two disjoint increasing index sets
int wedge_sign(uint8_t a, uint8_t b);

ExteriorElement wedge(const ExteriorElement& a, const ExteriorElement& b);

// Euclidean Hodge star, orientation +e^{1...7}; input must be homogeneous.
ExteriorElement hodge_star(const ExteriorElement& a);

// interior product; degree drops by one, zero on scalars
ExteriorElement contract(const Vector7& x, const ExteriorElement& a);

// relabel indices by perm (1-based: index i -> perm[i-1]), re-sorting with signs
ExteriorElement substitute_indices(const ExteriorElement& a, const std::array<int, 7>& perm);

}  // namespace g2flow
