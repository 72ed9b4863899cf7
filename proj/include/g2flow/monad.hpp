#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "g2flow/bigint.hpp"

namespace g2flow {

// Truncated Chern polynomial in the hyperplane class h: coefficients of
// 1, h, ..., h^dim, exact integers (stored as rationals internally to allow
// series inversion; integrality is checked on output).
class ChernPolynomial {
 public:
  ChernPolynomial() = default;
  explicit ChernPolynomial(int dim) : dim_(dim), c_(dim + 1, Rational(0)) {}

  static ChernPolynomial one(int dim);
  // (1 + a h)^k for integer a, truncated
  static ChernPolynomial line_bundle_power(int dim, long long a, int k);

  int dim() const { return dim_; }
  const Rational& coeff(int i) const { return c_[i]; }
  void set(int i, Rational v) { c_[i] = std::move(v); }

  friend ChernPolynomial operator*(const ChernPolynomial& a, const ChernPolynomial& b);
  friend ChernPolynomial operator/(const ChernPolynomial& a, const ChernPolynomial& b);
  ChernPolynomial inverse() const;  // series inverse, requires unit constant term
  ChernPolynomial truncate(int newdim) const;

  friend bool operator==(const ChernPolynomial& a, const ChernPolynomial& b) {
    return a.dim_ == b.dim_ && a.c_ == b.c_;
  }
  std::string to_string() const;

 private:
  int dim_ = 0;
  std::vector<Rational> c_;
};

// rank and total Chern class of the instanton-monad middle cohomology:
// O(-1)^c -> O^{2+2c} -> O(1)^c gives rank 2 and c(E) = (1-h^2)^{-c}
struct MonadChern {
  int rank = 2;
  ChernPolynomial total;
};
MonadChern chern_of_monad(int c, int dim);

// Chern data of the restriction E|_D through 0 -> E(-d) -> E -> E|_D -> 0
struct RestrictionChern {
  ChernPolynomial chern_e;           // ambient c(E)
  ChernPolynomial chern_e_twisted;   // c(E(-d)), rank-2 twist arithmetic
  ChernPolynomial pushforward;       // Whitney quotient c(E)/c(E(-d))
  ChernPolynomial on_divisor;        // restriction of c(E) to the divisor ring
  bool whitney_exact = false;        // c(E(-d)) * pushforward == c(E)
};
RestrictionChern restriction_chern(int c, int d, int dim);

// --- monads over Q[z0..z3] ---------------------------------------------------

using LinForm = std::array<Rational, 4>;  // linear form in z0..z3

struct MonadData {
  int c = 1;
  // alpha: (2+2c) x c, beta: c x (2+2c), row-major
  std::vector<LinForm> alpha;
  std::vector<LinForm> beta;

  const LinForm& A(int i, int j) const { return alpha[static_cast<size_t>(i) * c + j]; }
  const LinForm& B(int i, int j) const { return beta[static_cast<size_t>(i) * (2 + 2 * c) + j]; }
};

// the classical band pair with beta.alpha = 0 (specializes to the
// null-correlation data for c = 1)
MonadData monad_band_pair(int c);

// randomized monad: random GL(c) x GL(2+2c) x GL(c) basis changes and a
// random GL(4) variable substitution applied to the band pair; alpha is then
// re-solved from the exact kernel of the multiplication map (random rational
// basis), with fiberwise-rank retry. Throws after 100 failed attempts.
MonadData sample_monad(int c, uint64_t seed);

// beta.alpha as a polynomial matrix; true iff identically zero
bool monad_composition_zero(const MonadData& m);

// fiberwise ranks at a rational point
struct FiberRank {
  int rank_alpha = 0;
  int rank_beta = 0;
};
FiberRank fiber_ranks(const MonadData& m, const std::array<Rational, 4>& point);

// exactness spot-check at `npoints` seeded random rational points
bool fiberwise_exact(const MonadData& m, uint64_t seed, int npoints);

}  // namespace g2flow
