#include "g2flow/g2_numeric.hpp"

#include <cmath>
#include <stdexcept>

#include "g2flow/g2.hpp"

namespace g2flow {

const G2Tables& G2Tables::get() {
  static const G2Tables t = [] {
    G2Tables g{};
    int idx = 0;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) g.pair_index[i][j] = -1;
    for (int i = 0; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j) {
        g.pair[idx] = {i, j};
        g.pair_index[i][j] = idx;
        g.pair_index[j][i] = idx;
        ++idx;
      }
    auto mask_of = [&](int a) {
      return static_cast<uint8_t>((1u << g.pair[a][0]) | (1u << g.pair[a][1]));
    };
    for (int a = 0; a < 21; ++a) {
      ExteriorElement e;
      e.set(mask_of(a), Rational(1));
      ExteriorElement te = t_map(e);
      TwoFormSplit sp = t_eigen_split(e);
      for (int b = 0; b < 21; ++b) {
        g.tmap[b][a] = te.coeff(mask_of(b)).to_double();
        g.pplus[b][a] = sp.plus.coeff(mask_of(b)).to_double();
        g.pminus[b][a] = sp.minus.coeff(mask_of(b)).to_double();
      }
      for (int b = 0; b < 21; ++b) {
        ExteriorElement eb;
        eb.set(mask_of(b), Rational(1));
        g.w3[a][b] = wedge(wedge(e, eb), phi0()).coeff(0x7f).to_double();
      }
      ExteriorElement w = wedge(e, star_phi0());
      for (int c = 0; c < 7; ++c) {
        uint8_t m6 = static_cast<uint8_t>(0x7f & ~(1u << c));
        g.w6[a][c] = w.coeff(m6).to_double();
      }
    }
    return g;
  }();
  return t;
}

Form2Matrix7 g2_project(const Form2Matrix7& f, bool plus) {
  const G2Tables& t = G2Tables::get();
  const int rr = f.r * f.r;
  Form2Matrix7 out(f.r);
  for (int a = 0; a < 21; ++a) {
    cdouble* o = out.comp(a);
    for (int b = 0; b < 21; ++b) {
      double w = plus ? t.pplus[a][b] : t.pminus[a][b];
      if (w == 0.0) continue;
      const cdouble* src = f.comp(b);
      for (int k = 0; k < rr; ++k) o[k] += w * src[k];
    }
  }
  return out;
}

double g2_norm2(const Form2Matrix7& f) {
  double s = 0;
  const int rr = f.r * f.r;
  for (int a = 0; a < 21; ++a) {
    const cdouble* m = f.comp(a);
    for (int k = 0; k < rr; ++k) s += std::norm(m[k]);
  }
  return s;
}

namespace {
cdouble trace_prod(const cdouble* a, const cdouble* b, int r) {
  // tr(A B)
  cdouble s(0);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < r; ++k) s += a[i * r + k] * b[k * r + i];
  return s;
}
}  // namespace

ChernWeilReport chern_weil_report(const Form2Matrix7& f) {
  const G2Tables& t = G2Tables::get();
  ChernWeilReport rep;
  Form2Matrix7 fp = g2_project(f, true);
  Form2Matrix7 fm = g2_project(f, false);
  rep.norm_plus2 = g2_norm2(fp);
  rep.norm_minus2 = g2_norm2(fm);
  rep.ym = g2_norm2(f);
  // tr F^2 ^ phi0 read against the phi0-induced orientation (-e^{1..7})
  double kappa = 0;
  for (int a = 0; a < 21; ++a)
    for (int b = 0; b < 21; ++b) {
      if (t.w3[a][b] == 0.0) continue;
      kappa += t.w3[a][b] * trace_prod(f.comp(a), f.comp(b), f.r).real();
    }
  rep.kappa = -kappa;
  rep.ym_split_residual = std::abs(rep.ym - (3.0 * rep.norm_plus2 + rep.kappa));
  rep.kappa_identity_residual = std::abs(rep.kappa - (rep.norm_minus2 - 2.0 * rep.norm_plus2));
  return rep;
}

double instanton_residual(const Form2Matrix7& f) {
  const G2Tables& t = G2Tables::get();
  const int rr = f.r * f.r;
  double s = 0;
  std::vector<cdouble> acc(rr);
  for (int c = 0; c < 7; ++c) {
    std::fill(acc.begin(), acc.end(), cdouble(0));
    for (int a = 0; a < 21; ++a) {
      if (t.w6[a][c] == 0.0) continue;
      const cdouble* m = f.comp(a);
      for (int k = 0; k < rr; ++k) acc[k] += t.w6[a][c] * m[k];
    }
    for (int k = 0; k < rr; ++k) s += std::norm(acc[k]);
  }
  return std::sqrt(s);
}

Form2Matrix7 embed_one_one(int n, int r, const std::vector<cdouble>& f) {
  if (n < 1 || n > 3) throw std::invalid_argument("embed_one_one: need 1 <= n <= 3");
  if (f.size() != static_cast<size_t>(n) * n * r * r)
    throw std::invalid_argument("embed_one_one: bad component count");
  const G2Tables& t = G2Tables::get();
  // (u_j, v_j) frame pairs of dz^{j+1}, 0-based e-indices
  static const int U[3] = {6, 0, 1};
  static const int V[3] = {4, 2, 3};
  Form2Matrix7 out(r);
  const int rr = r * r;
  auto add_pair = [&](int i, int j, cdouble w, const cdouble* m) {
    // w * e^i ^ e^j with i != j, arbitrary order
    if (i == j) return;
    double sgn = 1.0;
    if (i > j) {
      std::swap(i, j);
      sgn = -1.0;
    }
    cdouble* o = out.comp(t.pair_index[i][j]);
    for (int k = 0; k < rr; ++k) o[k] += sgn * w * m[k];
  };
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const cdouble* m = f.data() + (static_cast<size_t>(j) * n + k) * rr;
      // dz_j ^ dzbar_k = (u_j + i v_j)^(u_k - i v_k)
      //   = u_j^u_k + v_j^v_k + i(v_j^u_k - u_j^v_k)
      add_pair(U[j], U[k], cdouble(1, 0), m);
      add_pair(V[j], V[k], cdouble(1, 0), m);
      add_pair(V[j], U[k], cdouble(0, 1), m);
      add_pair(U[j], V[k], cdouble(0, -1), m);
    }
  return out;
}

}  // namespace g2flow
