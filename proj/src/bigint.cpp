#include "g2flow/bigint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace g2flow {

BigInt::BigInt(long long v) {
  if (v == 0) return;
  sign_ = v > 0 ? 1 : -1;
  unsigned long long u = v > 0 ? static_cast<unsigned long long>(v)
                               : ~static_cast<unsigned long long>(v) + 1ULL;
  while (u) {
    mag_.push_back(static_cast<uint32_t>(u & 0xffffffffULL));
    u >>= 32;
  }
}

void BigInt::trim() {
  while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
  if (mag_.empty()) sign_ = 0;
}

bool BigInt::fits_int64() const {
  if (mag_.size() > 2) return false;
  unsigned long long u = 0;
  for (size_t i = mag_.size(); i-- > 0;) u = (u << 32) | mag_[i];
  if (sign_ >= 0) return u <= 0x7fffffffffffffffULL;
  return u <= 0x8000000000000000ULL;
}

long long BigInt::to_int64() const {
  unsigned long long u = 0;
  for (size_t i = mag_.size(); i-- > 0;) u = (u << 32) | mag_[i];
  return sign_ >= 0 ? static_cast<long long>(u) : -static_cast<long long>(u - 1) - 1;
}

int BigInt::compare_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r(std::max(a.size(), b.size()) + 1, 0);
  unsigned long long carry = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    unsigned long long s = carry;
    if (i < a.size()) s += a[i];
    if (i < b.size()) s += b[i];
    r[i] = static_cast<uint32_t>(s & 0xffffffffULL);
    carry = s >> 32;
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r = a;
  long long borrow = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    long long d = static_cast<long long>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
    if (d < 0) {
      d += 1LL << 32;
      borrow = 1;
    } else {
      borrow = 0;
    }
    r[i] = static_cast<uint32_t>(d);
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint32_t> r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    unsigned long long carry = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      unsigned long long cur = r[i + j] + carry +
                               static_cast<unsigned long long>(a[i]) * b[j];
      r[i + j] = static_cast<uint32_t>(cur & 0xffffffffULL);
      carry = cur >> 32;
    }
    size_t k = i + b.size();
    while (carry) {
      unsigned long long cur = r[k] + carry;
      r[k] = static_cast<uint32_t>(cur & 0xffffffffULL);
      carry = cur >> 32;
      ++k;
    }
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

// Knuth algorithm D on 32-bit limbs.
void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
  if (b.empty()) throw std::domain_error("BigInt: division by zero");
  if (compare_mag(a, b) < 0) {
    q.clear();
    r = a;
    return;
  }
  if (b.size() == 1) {
    q.assign(a.size(), 0);
    unsigned long long rem = 0;
    for (size_t i = a.size(); i-- > 0;) {
      unsigned long long cur = (rem << 32) | a[i];
      q[i] = static_cast<uint32_t>(cur / b[0]);
      rem = cur % b[0];
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
    r.clear();
    if (rem) r.push_back(static_cast<uint32_t>(rem));
    return;
  }
  // normalize so the top limb of divisor has its high bit set
  int shift = 0;
  uint32_t top = b.back();
  while (!(top & 0x80000000u)) {
    top <<= 1;
    ++shift;
  }
  auto shl = [&](const std::vector<uint32_t>& v) {
    std::vector<uint32_t> o(v.size() + 1, 0);
    for (size_t i = 0; i < v.size(); ++i) {
      o[i] |= v[i] << shift;
      if (shift) o[i + 1] = v[i] >> (32 - shift);
    }
    while (!o.empty() && o.back() == 0) o.pop_back();
    return o;
  };
  std::vector<uint32_t> u = shl(a), v = shl(b);
  size_t n = v.size(), m = u.size() - n;
  u.resize(u.size() + 1, 0);
  q.assign(m + 1, 0);
  const unsigned long long base = 1ULL << 32;
  for (size_t j = m + 1; j-- > 0;) {
    unsigned long long num = (static_cast<unsigned long long>(u[j + n]) << 32) | u[j + n - 1];
    unsigned long long qhat = num / v[n - 1];
    unsigned long long rhat = num % v[n - 1];
    while (qhat >= base ||
           qhat * v[n - 2] > ((rhat << 32) | u[j + n - 2])) {
      --qhat;
      rhat += v[n - 1];
      if (rhat >= base) break;
    }
    // multiply-subtract
    long long borrow = 0;
    unsigned long long carry = 0;
    for (size_t i = 0; i < n; ++i) {
      unsigned long long p = qhat * v[i] + carry;
      carry = p >> 32;
      long long t = static_cast<long long>(u[i + j]) - static_cast<long long>(p & 0xffffffffULL) - borrow;
      if (t < 0) {
        t += static_cast<long long>(base);
        borrow = 1;
      } else {
        borrow = 0;
      }
      u[i + j] = static_cast<uint32_t>(t);
    }
    long long t = static_cast<long long>(u[j + n]) - static_cast<long long>(carry) - borrow;
    if (t < 0) {
      // qhat was one too large; add back
      t += static_cast<long long>(base);
      --qhat;
      unsigned long long c2 = 0;
      for (size_t i = 0; i < n; ++i) {
        unsigned long long s = static_cast<unsigned long long>(u[i + j]) + v[i] + c2;
        u[i + j] = static_cast<uint32_t>(s & 0xffffffffULL);
        c2 = s >> 32;
      }
      t += static_cast<long long>(c2);
      t &= static_cast<long long>(base) - 1;
    }
    u[j + n] = static_cast<uint32_t>(t);
    q[j] = static_cast<uint32_t>(qhat);
  }
  while (!q.empty() && q.back() == 0) q.pop_back();
  // denormalize remainder
  r.assign(u.begin(), u.begin() + n);
  if (shift) {
    for (size_t i = 0; i < r.size(); ++i) {
      r[i] >>= shift;
      if (i + 1 < n) r[i] |= u[i + 1] << (32 - shift);
    }
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
}

BigInt operator+(const BigInt& a, const BigInt& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  BigInt r;
  if (a.sign_ == b.sign_) {
    r.sign_ = a.sign_;
    r.mag_ = BigInt::add_mag(a.mag_, b.mag_);
  } else {
    int c = BigInt::compare_mag(a.mag_, b.mag_);
    if (c == 0) return BigInt();
    if (c > 0) {
      r.sign_ = a.sign_;
      r.mag_ = BigInt::sub_mag(a.mag_, b.mag_);
    } else {
      r.sign_ = b.sign_;
      r.mag_ = BigInt::sub_mag(b.mag_, a.mag_);
    }
  }
  r.trim();
  return r;
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  r.sign_ = -r.sign_;
  return r;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
  BigInt r;
  if (a.is_zero() || b.is_zero()) return r;
  r.sign_ = a.sign_ * b.sign_;
  r.mag_ = BigInt::mul_mag(a.mag_, b.mag_);
  r.trim();
  return r;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
  std::vector<uint32_t> qm, rm;
  divmod_mag(a.mag_, b.mag_, qm, rm);
  q = BigInt();
  r = BigInt();
  q.mag_ = qm;
  r.mag_ = rm;
  q.sign_ = qm.empty() ? 0 : a.sign_ * b.sign_;
  r.sign_ = rm.empty() ? 0 : a.sign_;
}

BigInt operator/(const BigInt& a, const BigInt& b) {
  BigInt q, r;
  BigInt::divmod(a, b, q, r);
  return q;
}

BigInt operator%(const BigInt& a, const BigInt& b) {
  BigInt q, r;
  BigInt::divmod(a, b, q, r);
  return r;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a.sign_ = a.mag_.empty() ? 0 : 1;
  b.sign_ = b.mag_.empty() ? 0 : 1;
  while (!b.is_zero()) {
    BigInt q, r;
    divmod(a, b, q, r);
    a = b;
    b = r;
  }
  return a;
}

int BigInt::compare(const BigInt& a, const BigInt& b) {
  if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
  int c = compare_mag(a.mag_, b.mag_);
  return a.sign_ >= 0 ? c : -c;
}

std::string BigInt::to_string() const {
  if (is_zero()) return "0";
  std::vector<uint32_t> m = mag_;
  std::string digits;
  while (!m.empty()) {
    unsigned long long rem = 0;
    for (size_t i = m.size(); i-- > 0;) {
      unsigned long long cur = (rem << 32) | m[i];
      m[i] = static_cast<uint32_t>(cur / 1000000000ULL);
      rem = cur % 1000000000ULL;
    }
    while (!m.empty() && m.back() == 0) m.pop_back();
    for (int k = 0; k < 9; ++k) {
      digits.push_back(static_cast<char>('0' + rem % 10));
      rem /= 10;
    }
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  if (sign_ < 0) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

BigInt BigInt::from_string(const std::string& s) {
  BigInt r;
  size_t i = 0;
  int sg = 1;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
    if (s[i] == '-') sg = -1;
    ++i;
  }
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
    r = r * BigInt(10) + BigInt(s[i] - '0');
  }
  if (!r.is_zero() && sg < 0) r.sign_ = -1;
  return r;
}

double BigInt::to_double() const {
  double r = 0;
  for (size_t i = mag_.size(); i-- > 0;) r = r * 4294967296.0 + mag_[i];
  return sign_ < 0 ? -r : r;
}

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
  reduce();
}

void Rational::reduce() {
  if (num_.is_zero()) {
    den_ = BigInt(1);
    return;
  }
  if (den_.sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  BigInt g = BigInt::gcd(num_, den_);
  if (g != BigInt(1)) {
    num_ = num_ / g;
    den_ = den_ / g;
  }
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}
Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}
Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}
Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::domain_error("Rational: division by zero");
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}
Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

bool operator<(const Rational& a, const Rational& b) {
  return BigInt::compare(a.num() * b.den(), b.num() * a.den()) < 0;
}

std::string Rational::to_string() const {
  if (is_integer()) return num_.to_string();
  return num_.to_string() + "/" + den_.to_string();
}

double Rational::to_double() const { return num_.to_double() / den_.to_double(); }

}  // namespace g2flow
