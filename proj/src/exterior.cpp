#include "g2flow/exterior.hpp"

#include <bit>
#include <stdexcept>

namespace g2flow {

ExteriorElement ExteriorElement::basis(std::initializer_list<int> idx, Rational coeff) {
  uint8_t mask = 0;
  int sign = 1;
  std::vector<int> seen;
  for (int i : idx) {
    if (i < 1 || i > 7) throw std::invalid_argument("ExteriorElement: index out of range");
    uint8_t bit = static_cast<uint8_t>(1u << (i - 1));
    if (mask & bit) return ExteriorElement();  // repeated index
    // sign of inserting i into the already-listed indices
    int inv = 0;
    for (int j : seen)
      if (j > i) ++inv;
    if (inv & 1) sign = -sign;
    seen.push_back(i);
    mask |= bit;
  }
  ExteriorElement e;
  Rational c = sign > 0 ? coeff : -coeff;
  if (!c.is_zero()) e.terms_[mask] = c;
  return e;
}

ExteriorElement ExteriorElement::scalar(Rational c) {
  ExteriorElement e;
  if (!c.is_zero()) e.terms_[0] = c;
  return e;
}

int ExteriorElement::degree() const {
  if (terms_.empty()) return 0;
  int d = std::popcount(terms_.begin()->first);
  for (const auto& [m, c] : terms_)
    if (std::popcount(m) != d) throw std::domain_error("ExteriorElement: mixed degrees");
  return d;
}

bool ExteriorElement::is_homogeneous() const {
  if (terms_.empty()) return true;
  int d = std::popcount(terms_.begin()->first);
  for (const auto& [m, c] : terms_)
    if (std::popcount(m) != d) return false;
  return true;
}

Rational ExteriorElement::coeff(uint8_t mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? Rational(0) : it->second;
}

void ExteriorElement::set(uint8_t mask, const Rational& c) {
  if (c.is_zero())
    terms_.erase(mask);
  else
    terms_[mask] = c;
}

ExteriorElement operator+(const ExteriorElement& a, const ExteriorElement& b) {
  ExteriorElement r = a;
  for (const auto& [m, c] : b.terms_) r.set(m, r.coeff(m) + c);
  return r;
}

ExteriorElement operator-(const ExteriorElement& a, const ExteriorElement& b) {
  ExteriorElement r = a;
  for (const auto& [m, c] : b.terms_) r.set(m, r.coeff(m) - c);
  return r;
}

ExteriorElement operator*(const Rational& c, const ExteriorElement& a) {
  ExteriorElement r;
  if (c.is_zero()) return r;
  for (const auto& [m, x] : a.terms_) r.terms_[m] = c * x;
  return r;
}

ExteriorElement ExteriorElement::operator-() const { return Rational(-1) * *this; }

int wedge_sign(uint8_t a, uint8_t b) {
  // parity of #{(i,j) : i in a, j in b, j < i}
  int inv = 0;
  for (int i = 0; i < 7; ++i) {
    if (a & (1u << i)) inv += std::popcount(static_cast<uint8_t>(b & ((1u << i) - 1)));
  }
  return (inv & 1) ? -1 : 1;
}

ExteriorElement wedge(const ExteriorElement& a, const ExteriorElement& b) {
  ExteriorElement r;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      int s = wedge_sign(ma, mb);
      uint8_t m = ma | mb;
      Rational add = s > 0 ? ca * cb : -(ca * cb);
      r.set(m, r.coeff(m) + add);
    }
  }
  return r;
}

ExteriorElement hodge_star(const ExteriorElement& a) {
  if (!a.is_homogeneous()) throw std::invalid_argument("hodge_star: non-homogeneous input");
  ExteriorElement r;
  for (const auto& [m, c] : a.terms()) {
    uint8_t comp = static_cast<uint8_t>(~m & 0x7f);
    int s = wedge_sign(m, comp);  // e^m ^ e^comp = s * e^{1..7}
    r.set(comp, r.coeff(comp) + (s > 0 ? c : -c));
  }
  return r;
}

ExteriorElement contract(const Vector7& x, const ExteriorElement& a) {
  ExteriorElement r;
  for (const auto& [m, c] : a.terms()) {
    if (m == 0) continue;  // scalars contract to zero
    int pos = 0;
    for (int i = 0; i < 7; ++i) {
      uint8_t bit = static_cast<uint8_t>(1u << i);
      if (!(m & bit)) continue;
      if (!x.c[i].is_zero()) {
        Rational term = x.c[i] * c;
        if (pos & 1) term = -term;
        uint8_t rest = static_cast<uint8_t>(m & ~bit);
        r.set(rest, r.coeff(rest) + term);
      }
      ++pos;
    }
  }
  return r;
}

ExteriorElement substitute_indices(const ExteriorElement& a, const std::array<int, 7>& perm) {
  ExteriorElement r;
  for (const auto& [m, c] : a.terms()) {
    std::vector<int> mapped;
    for (int i = 0; i < 7; ++i)
      if (m & (1u << i)) mapped.push_back(perm[i]);
    // sort with sign
    int sign = 1;
    for (size_t i = 0; i + 1 < mapped.size(); ++i)
      for (size_t j = 0; j + 1 < mapped.size() - i; ++j)
        if (mapped[j] > mapped[j + 1]) {
          std::swap(mapped[j], mapped[j + 1]);
          sign = -sign;
        }
    uint8_t mm = 0;
    for (int i : mapped) mm |= static_cast<uint8_t>(1u << (i - 1));
    Rational add = sign > 0 ? c : -c;
    r.set(mm, r.coeff(mm) + add);
  }
  return r;
}

std::string ExteriorElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) s += " + ";
    first = false;
    s += c.to_string();
    if (m) {
      s += "*e{";
      for (int i = 0; i < 7; ++i)
        if (m & (1u << i)) s += std::to_string(i + 1);
      s += "}";
    }
  }
  return s;
}

Vector7 Vector7::basis(int i) {
  Vector7 v;
  v.c[i - 1] = Rational(1);
  return v;
}

Vector7 operator+(const Vector7& a, const Vector7& b) {
  Vector7 r;
  for (int i = 0; i < 7; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}
Vector7 operator-(const Vector7& a, const Vector7& b) {
  Vector7 r;
  for (int i = 0; i < 7; ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}
Vector7 operator*(const Rational& s, const Vector7& a) {
  Vector7 r;
  for (int i = 0; i < 7; ++i) r.c[i] = s * a.c[i];
  return r;
}
bool Vector7::is_zero() const {
  for (const auto& x : c)
    if (!x.is_zero()) return false;
  return true;
}

}  // namespace g2flow
