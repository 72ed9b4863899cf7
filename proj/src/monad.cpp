#include "g2flow/monad.hpp"

#include <stdexcept>

#include "g2flow/prng.hpp"

namespace g2flow {

ChernPolynomial ChernPolynomial::one(int dim) {
  ChernPolynomial p(dim);
  p.c_[0] = Rational(1);
  return p;
}

ChernPolynomial ChernPolynomial::line_bundle_power(int dim, long long a, int k) {
  ChernPolynomial base(dim);
  base.c_[0] = Rational(1);
  if (dim >= 1) base.c_[1] = Rational(a);
  ChernPolynomial acc = one(dim);
  for (int i = 0; i < k; ++i) acc = acc * base;
  return acc;
}

ChernPolynomial operator*(const ChernPolynomial& a, const ChernPolynomial& b) {
  ChernPolynomial r(a.dim_);
  for (int i = 0; i <= a.dim_; ++i)
    for (int j = 0; i + j <= a.dim_ && j <= b.dim_; ++j)
      r.c_[i + j] += a.c_[i] * b.c_[j];
  return r;
}

ChernPolynomial ChernPolynomial::inverse() const {
  if (c_[0] != Rational(1) && c_[0] != Rational(-1) && c_[0].is_zero())
    throw std::domain_error("ChernPolynomial::inverse: zero constant term");
  ChernPolynomial r(dim_);
  r.c_[0] = Rational(1) / c_[0];
  for (int k = 1; k <= dim_; ++k) {
    Rational acc(0);
    for (int j = 1; j <= k; ++j) acc += c_[j] * r.c_[k - j];
    r.c_[k] = -acc / c_[0];
  }
  return r;
}

ChernPolynomial operator/(const ChernPolynomial& a, const ChernPolynomial& b) {
  return a * b.inverse();
}

ChernPolynomial ChernPolynomial::truncate(int newdim) const {
  ChernPolynomial r(newdim);
  for (int i = 0; i <= newdim && i <= dim_; ++i) r.c_[i] = c_[i];
  return r;
}

std::string ChernPolynomial::to_string() const {
  std::string s = c_[0].to_string();
  for (int i = 1; i <= dim_; ++i) {
    if (c_[i].is_zero()) continue;
    s += " + " + c_[i].to_string() + "*h^" + std::to_string(i);
  }
  return s;
}

MonadChern chern_of_monad(int c, int dim) {
  if (c < 1) throw std::invalid_argument("chern_of_monad: c >= 1 required");
  if (dim < 2 || dim > 3) throw std::invalid_argument("chern_of_monad: dim in {2,3}");
  MonadChern out;
  out.rank = 2;
  // c(E) = c(O)^{2+2c} / (c(O(-1))^c c(O(1))^c) = ((1-h)(1+h))^{-c}
  ChernPolynomial denom =
      ChernPolynomial::line_bundle_power(dim, -1, c) * ChernPolynomial::line_bundle_power(dim, 1, c);
  out.total = denom.inverse();
  return out;
}

RestrictionChern restriction_chern(int c, int d, int dim) {
  if (d < 1) throw std::invalid_argument("restriction_chern: d >= 1 required");
  RestrictionChern out;
  out.chern_e = chern_of_monad(c, dim).total;
  // rank-2 twist by O(-d): c1 -> c1 - 2d h, c2 -> c2 + c1(-d h) + d^2 h^2
  ChernPolynomial tw(dim);
  tw.set(0, Rational(1));
  const Rational c1 = dim >= 1 ? out.chern_e.coeff(1) : Rational(0);
  const Rational c2 = dim >= 2 ? out.chern_e.coeff(2) : Rational(0);
  if (dim >= 1) tw.set(1, c1 + Rational(-2 * d));
  if (dim >= 2) tw.set(2, c2 + c1 * Rational(-d) + Rational(static_cast<long long>(d) * d));
  out.chern_e_twisted = tw;
  out.pushforward = out.chern_e / out.chern_e_twisted;
  out.whitney_exact = (out.chern_e_twisted * out.pushforward) == out.chern_e;
  // restriction to the divisor: same coefficients in the divisor ring,
  // truncated at its dimension
  out.on_divisor = out.chern_e.truncate(dim - 1 >= 2 ? dim - 1 : 2);
  return out;
}

MonadData monad_band_pair(int c) {
  MonadData m;
  m.c = c;
  const int w = 2 + 2 * c;
  m.alpha.assign(static_cast<size_t>(w) * c, LinForm{});
  m.beta.assign(static_cast<size_t>(c) * w, LinForm{});
  auto lin = [](int var) {
    LinForm f{};
    f[var] = Rational(1);
    return f;
  };
  // beta = [X | Y]: X_{i,i} = z0, X_{i,i+1} = z1; Y_{i,i} = z2, Y_{i,i+1} = z3
  for (int i = 0; i < c; ++i) {
    m.beta[static_cast<size_t>(i) * w + i] = lin(0);
    m.beta[static_cast<size_t>(i) * w + i + 1] = lin(1);
    m.beta[static_cast<size_t>(i) * w + (c + 1) + i] = lin(2);
    m.beta[static_cast<size_t>(i) * w + (c + 1) + i + 1] = lin(3);
  }
  // alpha = [Ytil; -Xtil]: Ytil_{i,i} = z3, Ytil_{i+1,i} = z2;
  //                        Xtil_{i,i} = z1, Xtil_{i+1,i} = z0
  auto neg = [](LinForm f) {
    for (auto& x : f) x = -x;
    return f;
  };
  for (int j = 0; j < c; ++j) {
    m.alpha[static_cast<size_t>(j) * c + j] = lin(3);
    m.alpha[static_cast<size_t>(j + 1) * c + j] = lin(2);
    m.alpha[static_cast<size_t>(c + 1 + j) * c + j] = neg(lin(1));
    m.alpha[static_cast<size_t>(c + 1 + j + 1) * c + j] = neg(lin(0));
  }
  return m;
}

bool monad_composition_zero(const MonadData& m) {
  const int w = 2 + 2 * m.c;
  // each entry of beta.alpha is a quadratic form; expand on the 10 monomials
  for (int i = 0; i < m.c; ++i)
    for (int j = 0; j < m.c; ++j) {
      Rational quad[4][4];
      for (int k = 0; k < w; ++k) {
        const LinForm& b = m.B(i, k);
        const LinForm& a = m.A(k, j);
        for (int p = 0; p < 4; ++p)
          for (int q = 0; q < 4; ++q) quad[p][q] += b[p] * a[q];
      }
      for (int p = 0; p < 4; ++p)
        for (int q = p; q < 4; ++q) {
          Rational coeff = p == q ? quad[p][p] : quad[p][q] + quad[q][p];
          if (!coeff.is_zero()) return false;
        }
    }
  return true;
}

namespace {

int rational_rank(std::vector<std::vector<Rational>> rows, int ncols) {
  int rank = 0;
  for (int col = 0; col < ncols && rank < static_cast<int>(rows.size()); ++col) {
    int pivot = -1;
    for (std::size_t r = rank; r < rows.size(); ++r)
      if (!rows[r][col].is_zero()) {
        pivot = static_cast<int>(r);
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int>(r) == rank || rows[r][col].is_zero()) continue;
      Rational f = rows[r][col] / rows[rank][col];
      for (int k = col; k < ncols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

// kernel basis of an m x n rational matrix (columns of the returned matrix)
std::vector<std::vector<Rational>> rational_kernel(std::vector<std::vector<Rational>> rows,
                                                   int ncols) {
  const int nrows = static_cast<int>(rows.size());
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < ncols && rank < nrows; ++col) {
    int pivot = -1;
    for (int r = rank; r < nrows; ++r)
      if (!rows[r][col].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    Rational inv = Rational(1) / rows[rank][col];
    for (int k = col; k < ncols; ++k) rows[rank][k] *= inv;
    for (int r = 0; r < nrows; ++r) {
      if (r == rank || rows[r][col].is_zero()) continue;
      Rational f = rows[r][col];
      for (int k = col; k < ncols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<char> is_pivot(ncols, 0);
  for (int pc : pivot_col) is_pivot[pc] = 1;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> vec(ncols, Rational(0));
    vec[free] = Rational(1);
    for (int r = 0; r < rank; ++r) vec[pivot_col[r]] = -rows[r][free];
    basis.push_back(std::move(vec));
  }
  return basis;
}

std::vector<std::vector<Rational>> random_invertible(Prng& rng, int n) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m[i][j] = Rational(rng.uniform_int(-3, 3));
    if (rational_rank(m, n) == n) return m;
  }
  throw std::runtime_error("random_invertible: no invertible sample (improbable)");
}

LinForm substitute(const LinForm& f, const std::vector<std::vector<Rational>>& v) {
  // z_p -> sum_q v[p][q] z_q
  LinForm out{};
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) out[q] += f[p] * v[p][q];
  return out;
}

}  // namespace

FiberRank fiber_ranks(const MonadData& m, const std::array<Rational, 4>& point) {
  const int w = 2 + 2 * m.c;
  FiberRank out;
  std::vector<std::vector<Rational>> am(w, std::vector<Rational>(m.c));
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < m.c; ++j) {
      Rational v(0);
      for (int p = 0; p < 4; ++p) v += m.A(i, j)[p] * point[p];
      am[i][j] = v;
    }
  out.rank_alpha = rational_rank(am, m.c);
  std::vector<std::vector<Rational>> bm(m.c, std::vector<Rational>(w));
  for (int i = 0; i < m.c; ++i)
    for (int j = 0; j < w; ++j) {
      Rational v(0);
      for (int p = 0; p < 4; ++p) v += m.B(i, j)[p] * point[p];
      bm[i][j] = v;
    }
  out.rank_beta = rational_rank(bm, w);
  return out;
}

bool fiberwise_exact(const MonadData& m, uint64_t seed, int npoints) {
  Prng rng(seed);
  for (int i = 0; i < npoints; ++i) {
    std::array<Rational, 4> p;
    bool nonzero = false;
    for (int k = 0; k < 4; ++k) {
      long long v = rng.uniform_int(-9, 9);
      p[k] = Rational(v);
      nonzero = nonzero || v != 0;
    }
    if (!nonzero) p[0] = Rational(1);
    FiberRank fr = fiber_ranks(m, p);
    if (fr.rank_alpha != m.c || fr.rank_beta != m.c) return false;
  }
  return true;
}

MonadData sample_monad(int c, uint64_t seed) {
  if (c < 1) throw std::invalid_argument("sample_monad: c >= 1 required");
  Prng rng(seed);
  const int w = 2 + 2 * c;
  for (int attempt = 0; attempt < 100; ++attempt) {
    MonadData band = monad_band_pair(c);
    auto g = random_invertible(rng, c);
    auto mm = random_invertible(rng, w);
    auto vv = random_invertible(rng, 4);

    // beta' = g . beta(band, substituted) . M
    MonadData out;
    out.c = c;
    out.beta.assign(static_cast<size_t>(c) * w, LinForm{});
    out.alpha.assign(static_cast<size_t>(w) * c, LinForm{});
    std::vector<LinForm> bsub(static_cast<size_t>(c) * w);
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < w; ++j) bsub[static_cast<size_t>(i) * w + j] = substitute(band.B(i, j), vv);
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < w; ++j) {
        LinForm acc{};
        for (int a = 0; a < c; ++a)
          for (int b = 0; b < w; ++b) {
            const Rational f = g[i][a] * mm[b][j];
            if (f.is_zero()) continue;
            for (int p = 0; p < 4; ++p) acc[p] += f * bsub[static_cast<size_t>(a) * w + b][p];
          }
        out.beta[static_cast<size_t>(i) * w + j] = acc;
      }

    // solve alpha from the exact kernel of the multiplication map:
    // unknowns are the 4w coefficients of one column of linear forms;
    // constraints are the 10 c quadratic-monomial coefficients of beta'.col
    const int nunk = 4 * w;
    std::vector<std::vector<Rational>> sys(10 * c, std::vector<Rational>(nunk, Rational(0)));
    int row = 0;
    for (int i = 0; i < c; ++i) {
      // entry_i = sum_k beta_{ik} . col_k with col_k = sum_p u_{kp} z_p
      // coefficient of z_p z_q (p<=q): sum_k (B[p] u[q] + B[q] u[p]) etc.
      for (int p = 0; p < 4; ++p)
        for (int q = p; q < 4; ++q) {
          for (int k = 0; k < w; ++k) {
            const LinForm& b = out.B(i, k);
            if (p == q)
              sys[row][4 * k + p] += b[p];
            else {
              sys[row][4 * k + q] += b[p];
              sys[row][4 * k + p] += b[q];
            }
          }
          ++row;
        }
    }
    auto kernel = rational_kernel(sys, nunk);
    if (static_cast<int>(kernel.size()) < c) continue;

    // random rational combination of the kernel basis for the c columns
    bool ok = true;
    for (int j = 0; j < c && ok; ++j) {
      std::vector<Rational> col(nunk, Rational(0));
      for (std::size_t b = 0; b < kernel.size(); ++b) {
        Rational f(rng.uniform_int(-3, 3));
        if (f.is_zero()) continue;
        for (int t = 0; t < nunk; ++t) col[t] += f * kernel[b][t];
      }
      for (int k = 0; k < w; ++k) {
        LinForm lf{};
        for (int p = 0; p < 4; ++p) lf[p] = col[4 * k + p];
        out.alpha[static_cast<size_t>(k) * c + j] = lf;
      }
    }
    if (!monad_composition_zero(out)) continue;  // should not happen
    if (!fiberwise_exact(out, rng.next_u64(), 20)) ok = false;
    if (ok) return out;
  }
  throw std::runtime_error("sample_monad: no full-rank pair after 100 attempts (measure-zero event)");
}

}  // namespace g2flow
