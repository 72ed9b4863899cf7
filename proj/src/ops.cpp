#include "g2flow/ops.hpp"

#include <atomic>
#include <map>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "g2flow/kernels.hpp"
#include "g2flow/parallel.hpp"
#include "g2flow/smallmat.hpp"

namespace g2flow {

EndoField deriv_axis(const LatticeChart& g, const EndoField& f, int axis, Stencil st) {
  const LatticeChart::Axis ax = g.axis(axis);
  const std::size_t inner = ax.stride * f.block();  // complex elements per row
  const std::size_t L = static_cast<std::size_t>(ax.length);
  const std::size_t rowspan = L * inner;
  const std::size_t nlines = f.sites * f.block() / rowspan;
  EndoField out(f.sites, f.r);
  const Kernels& K = kernels();
  const cdouble* in = f.v.data();
  cdouble* o = out.v.data();

  if (st == Stencil::central) {
    const cdouble scale(1.0 / (2.0 * ax.h), 0.0);
    parallel_for(nlines, [&](std::size_t line) {
      const std::size_t base = line * rowspan;
      if (L >= 3)
        K.csub_scale(o + base + inner, in + base + 2 * inner, in + base, scale, (L - 2) * inner);
      if (ax.periodic) {
        K.csub_scale(o + base, in + base + inner, in + base + (L - 1) * inner, scale, inner);
        K.csub_scale(o + base + (L - 1) * inner, in + base, in + base + (L - 2) * inner, scale,
                     inner);
      } else {
        // one-sided second order: (-3 f0 + 4 f1 - f2) / 2h and its mirror
        K.caxpby(o + base, cdouble(-3.0) * scale, in + base, cdouble(4.0) * scale,
                 in + base + inner, inner);
        K.cacc(o + base, -scale, in + base + 2 * inner, inner);
        const std::size_t top = base + (L - 1) * inner;
        K.caxpby(o + top, cdouble(3.0) * scale, in + top, cdouble(-4.0) * scale, in + top - inner,
                 inner);
        K.cacc(o + top, scale, in + top - 2 * inner, inner);
      }
    });
    return out;
  }

  const cdouble scale(1.0 / ax.h, 0.0);
  const bool fwd = st == Stencil::forward;
  parallel_for(nlines, [&](std::size_t line) {
    const std::size_t base = line * rowspan;
    if (fwd) {
      K.csub_scale(o + base, in + base + inner, in + base, scale, (L - 1) * inner);
      const std::size_t top = base + (L - 1) * inner;
      if (ax.periodic) {
        K.csub_scale(o + top, in + base, in + top, scale, inner);
      } else {
        // keep the second-order one-sided row at the closed end
        K.caxpby(o + top, cdouble(1.5) * scale, in + top, cdouble(-2.0) * scale, in + top - inner,
                 inner);
        K.cacc(o + top, cdouble(0.5) * scale, in + top - 2 * inner, inner);
      }
    } else {
      K.csub_scale(o + base + inner, in + base + inner, in + base, scale, (L - 1) * inner);
      if (ax.periodic) {
        K.csub_scale(o + base, in + base, in + base + (L - 1) * inner, scale, inner);
      } else {
        K.caxpby(o + base, cdouble(-1.5) * scale, in + base, cdouble(2.0) * scale, in + base + inner,
                 inner);
        K.cacc(o + base, cdouble(-0.5) * scale, in + base + 2 * inner, inner);
      }
    }
  });
  return out;
}

namespace {
EndoField deriv_complex(const LatticeChart& g, const EndoField& f, int j, Stencil st, bool anti) {
  auto ax = g.complex_axes(j);
  EndoField du = deriv_axis(g, f, ax[0], st);
  EndoField dv = deriv_axis(g, f, ax[1], st);
  EndoField out(f.sites, f.r);
  kernels().caxpby(out.v.data(), cdouble(0.5, 0.0), du.v.data(), cdouble(0.0, anti ? 0.5 : -0.5),
                   dv.v.data(), out.v.size());
  return out;
}
}  // namespace

EndoField deriv_holo(const LatticeChart& g, const EndoField& f, int j, Stencil st) {
  return deriv_complex(g, f, j, st, false);
}

EndoField deriv_anti(const LatticeChart& g, const EndoField& f, int j, Stencil st) {
  return deriv_complex(g, f, j, st, true);
}

namespace {
void add_commutator(cdouble* out, const cdouble* a, const cdouble* b, int r) {
  for (int x = 0; x < r; ++x)
    for (int y = 0; y < r; ++y) {
      cdouble acc(0);
      for (int z = 0; z < r; ++z) acc += a[x * r + z] * b[z * r + y] - b[x * r + z] * a[z * r + y];
      out[x * r + y] += acc;
    }
}
}  // namespace

OneFormField dolbeault(const LatticeChart& g, const EndoField& f, const HolomorphicTwist& tw) {
  const int n = g.ncomplex();
  const int r = f.r;
  OneFormField out(f.sites, n, r);
  for (int j = 0; j < n; ++j) {
    EndoField d = deriv_anti(g, f, j);
    parallel_for(f.sites, [&](std::size_t s) {
      cdouble* o = out.at(s, j);
      std::memcpy(o, d.at(s), sizeof(cdouble) * r * r);
      if (!tw.zero) add_commutator(o, tw.a.at(s, j), f.at(s), r);
    });
  }
  return out;
}

OneFormField dolbeault_conj(const LatticeChart& g, const EndoField& f, const HolomorphicTwist& tw,
                            const EndoField& k) {
  const int n = g.ncomplex();
  const int r = f.r;
  EndoField kinv = field_inverse(g, k);
  std::vector<EndoField> A = chern_potential(g, k, kinv, tw);
  OneFormField out(f.sites, n, r);
  for (int j = 0; j < n; ++j) {
    EndoField d = deriv_holo(g, f, j);
    parallel_for(f.sites, [&](std::size_t s) {
      cdouble* o = out.at(s, j);
      std::memcpy(o, d.at(s), sizeof(cdouble) * r * r);
      add_commutator(o, A[j].at(s), f.at(s), r);
    });
  }
  return out;
}

void field_mat_mul(EndoField& out, const EndoField& a, const EndoField& b) {
  const int r = a.r;
  if (r == 1) {
    kernels().cmul(out.v.data(), a.v.data(), b.v.data(), a.sites);
    return;
  }
  if (r == 2) {
    kernels().matmul2_batch(out.v.data(), a.v.data(), b.v.data(), a.sites);
    return;
  }
  parallel_for(a.sites, [&](std::size_t s) { mat_mul(out.at(s), a.at(s), b.at(s), r); });
}

void field_add_scaled(EndoField& y, cdouble c, const EndoField& x) {
  kernels().cacc(y.v.data(), c, x.v.data(), y.v.size());
}

EndoField field_inverse(const LatticeChart& g, const EndoField& h) {
  EndoField out(h.sites, h.r);
  std::atomic<std::size_t> bad{h.sites};
  parallel_for(h.sites, [&](std::size_t s) {
    try {
      mat_inverse(out.at(s), h.at(s), h.r);
    } catch (const std::domain_error&) {
      std::size_t expect = h.sites;
      bad.compare_exchange_strong(expect, s);
    }
  });
  if (bad.load() != h.sites)
    throw std::domain_error("field_inverse: singular matrix at " + g.describe(bad.load()));
  return out;
}

EndoField field_adjoint(const EndoField& a) {
  EndoField out(a.sites, a.r);
  parallel_for(a.sites, [&](std::size_t s) { mat_adjoint(out.at(s), a.at(s), a.r); });
  return out;
}

std::vector<EndoField> chern_potential(const LatticeChart& g, const EndoField& h,
                                       const EndoField& hinv, const HolomorphicTwist& tw,
                                       Stencil st) {
  const int n = g.ncomplex();
  std::vector<EndoField> A;
  A.reserve(n);
  EndoField tmp(h.sites, h.r);
  for (int j = 0; j < n; ++j) {
    EndoField dh = deriv_holo(g, h, j, st);
    EndoField aj(h.sites, h.r);
    field_mat_mul(aj, hinv, dh);
    if (!tw.zero) {
      // - H^{-1} a_j^dagger H
      EndoField adag(h.sites, h.r);
      parallel_for(h.sites, [&](std::size_t s) { mat_adjoint(adag.at(s), tw.a.at(s, j), h.r); });
      field_mat_mul(tmp, hinv, adag);
      EndoField tmp2(h.sites, h.r);
      field_mat_mul(tmp2, tmp, h);
      field_add_scaled(aj, cdouble(-1.0), tmp2);
    }
    A.push_back(std::move(aj));
  }
  return A;
}

namespace {

// one staggered orientation of the curvature: holomorphic derivatives with
// `holo`, antiholomorphic with `anti`
CurvatureField curvature_oriented(const LatticeChart& g, const EndoField& h,
                                  const EndoField& hinv, const HolomorphicTwist& tw,
                                  Stencil holo, Stencil anti) {
  const int n = g.ncomplex();
  const int r = h.r;
  std::vector<EndoField> A = chern_potential(g, h, hinv, tw, holo);

  CurvatureField F(h.sites, n, r);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      EndoField dA = deriv_anti(g, A[j], k, anti);  // d_kbar A_j
      if (!tw.zero) {
        EndoField ak(h.sites, r);
        parallel_for(h.sites, [&](std::size_t s) {
          std::memcpy(ak.at(s), tw.a.at(s, k), sizeof(cdouble) * r * r);
        });
        EndoField da = deriv_holo(g, ak, j, holo);  // d_j a_kbar
        parallel_for(h.sites, [&](std::size_t s) {
          cdouble* out = F.at(s, j, k);
          const cdouble* pj = A[j].at(s);
          const cdouble* pk = ak.at(s);
          const cdouble* d1 = da.at(s);
          const cdouble* d2 = dA.at(s);
          // F = d_j a_kbar - d_kbar A_j + [A_j, a_kbar]
          for (int t = 0; t < r * r; ++t) out[t] = d1[t] - d2[t];
          for (int x = 0; x < r; ++x)
            for (int y = 0; y < r; ++y) {
              cdouble acc(0);
              for (int z = 0; z < r; ++z)
                acc += pj[x * r + z] * pk[z * r + y] - pk[x * r + z] * pj[z * r + y];
              out[x * r + y] += acc;
            }
        });
      } else {
        parallel_for(h.sites, [&](std::size_t s) {
          cdouble* out = F.at(s, j, k);
          const cdouble* d2 = dA.at(s);
          for (int t = 0; t < r * r; ++t) out[t] = -d2[t];
        });
      }
    }
  }
  return F;
}

}  // namespace

CurvatureField curvature_raw(const LatticeChart& g, const EndoField& h,
                             const HolomorphicTwist& tw) {
  EndoField hinv = field_inverse(g, h);
  CurvatureField a =
      curvature_oriented(g, h, hinv, tw, Stencil::forward, Stencil::backward);
  CurvatureField b =
      curvature_oriented(g, h, hinv, tw, Stencil::backward, Stencil::forward);
  kernels().caxpby(a.v.data(), cdouble(0.5), a.v.data(), cdouble(0.5), b.v.data(), a.v.size());
  return a;
}

CurvatureField curvature(const LatticeChart& g, const EndoField& h, const HolomorphicTwist& tw) {
  const int n = g.ncomplex();
  const int r = h.r;
  CurvatureField F = curvature_raw(g, h, tw);
  EndoField hinv = field_inverse(g, h);
  // H-adjoint symmetrization: F_{j kbar} <- (F_{j kbar} + H^{-1} F_{k jbar}^dagger H)/2,
  // which enforces the Chern-connection reality exactly (continuum identity,
  // O(h^2) correction here)
  parallel_for(h.sites, [&](std::size_t s) {
    std::vector<cdouble> tmp1(r * r), tmp2(r * r), tmp3(r * r);
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        cdouble* fjk = F.at(s, j, k);
        cdouble* fkj = F.at(s, k, j);
        mat_adjoint(tmp1.data(), fkj, r);
        mat_mul(tmp2.data(), hinv.at(s), tmp1.data(), r);
        mat_mul(tmp3.data(), tmp2.data(), h.at(s), r);  // H^{-1} F_kj^dag H
        for (int t = 0; t < r * r; ++t) {
          cdouble sym = 0.5 * (fjk[t] + tmp3[t]);
          fjk[t] = sym;
        }
        // enforce the pair relation on the mirrored component
        mat_adjoint(tmp1.data(), fjk, r);
        mat_mul(tmp2.data(), hinv.at(s), tmp1.data(), r);
        mat_mul(tmp3.data(), tmp2.data(), h.at(s), r);
        std::memcpy(fkj, tmp3.data(), sizeof(cdouble) * r * r);
      }
  });
  return F;
}

EndoField lambda_contract(const CurvatureField& f) {
  EndoField out(f.sites, f.r);
  const int rr = f.r * f.r;
  const cdouble m2i(0.0, -2.0);
  parallel_for(f.sites, [&](std::size_t s) {
    cdouble* o = out.at(s);
    for (int j = 0; j < f.n; ++j) {
      const cdouble* c = f.at(s, j, j);
      for (int t = 0; t < rr; ++t) o[t] += m2i * c[t];
    }
  });
  return out;
}

ScalarField e_hat_field(const EndoField& fhat) {
  ScalarField out(fhat.sites);
  const int r = fhat.r;
  parallel_for(fhat.sites, [&](std::size_t s) {
    // tr((i F_hat)^2); real and >= 0 once i F_hat is H-Hermitian
    const cdouble* m = fhat.at(s);
    cdouble tr(0);
    for (int i = 0; i < r; ++i)
      for (int k = 0; k < r; ++k) tr += m[i * r + k] * m[k * r + i];
    double val = -tr.real();  // (i F)^2 = -F^2
    out.v[s] = val > 0 ? val : 0.0;
  });
  return out;
}

double sup_scalar(const ScalarField& f) {
  double m = 0;
  for (double x : f.v)
    if (x > m) m = x;
  return m;
}

EndoField kahler_laplacian(const LatticeChart& g, const EndoField& f, const HolomorphicTwist& tw,
                           const EndoField& k) {
  const int n = g.ncomplex();
  const int r = f.r;
  EndoField kinv = field_inverse(g, k);
  EndoField out(f.sites, r);
  const Stencil holo[2] = {Stencil::forward, Stencil::backward};
  const Stencil anti[2] = {Stencil::backward, Stencil::forward};
  for (int o = 0; o < 2; ++o) {
    std::vector<EndoField> A = chern_potential(g, k, kinv, tw, holo[o]);
    for (int j = 0; j < n; ++j) {
      EndoField psi = deriv_holo(g, f, j, holo[o]);
      parallel_for(f.sites, [&](std::size_t s) {
        cdouble* p = psi.at(s);
        const cdouble* a = A[j].at(s);
        const cdouble* ff = f.at(s);
        for (int x = 0; x < r; ++x)
          for (int y = 0; y < r; ++y) {
            cdouble acc(0);
            for (int z = 0; z < r; ++z)
              acc += a[x * r + z] * ff[z * r + y] - ff[x * r + z] * a[z * r + y];
            p[x * r + y] += acc;
          }
      });
      EndoField dpsi = deriv_anti(g, psi, j, anti[o]);
      parallel_for(f.sites, [&](std::size_t s) {
        cdouble* po = out.at(s);
        cdouble* d = dpsi.at(s);
        const cdouble* aj = tw.zero ? nullptr : tw.a.at(s, j);
        const cdouble* p = psi.at(s);
        for (int x = 0; x < r; ++x)
          for (int y = 0; y < r; ++y) {
            cdouble acc = d[x * r + y];
            if (aj) {
              for (int z = 0; z < r; ++z)
                acc += aj[x * r + z] * p[z * r + y] - p[x * r + z] * aj[z * r + y];
            }
            po[x * r + y] += cdouble(-2.0) * acc;  // -4 * (average of two)
          }
      });
    }
  }
  return out;
}

EndoField kahler_laplacian_flat(const LatticeChart& g, const EndoField& f) {
  HolomorphicTwist tw = HolomorphicTwist::none(g, f.r);
  EndoField id = EndoField::identity(f.sites, f.r);
  return kahler_laplacian(g, f, tw, id);
}

ScalarField covariant_grad_norm2(const LatticeChart& g, const EndoField& f,
                                 const HolomorphicTwist& tw, const EndoField& k,
                                 const EndoField& kinv) {
  const int n = g.ncomplex();
  const int r = f.r;
  ScalarField out(f.sites);
  const Stencil st[2] = {Stencil::forward, Stencil::backward};
  for (int o = 0; o < 2; ++o) {
    std::vector<EndoField> A = chern_potential(g, k, kinv, tw, st[o]);
    for (int j = 0; j < n; ++j) {
      EndoField psi = deriv_holo(g, f, j, st[o]);
      EndoField phib = deriv_anti(g, f, j, st[o]);
      parallel_for(f.sites, [&](std::size_t s) {
        const cdouble* a = A[j].at(s);
        const cdouble* aj = tw.zero ? nullptr : tw.a.at(s, j);
        const cdouble* ff = f.at(s);
        double acc = 0;
        for (int x = 0; x < r; ++x)
          for (int y = 0; y < r; ++y) {
            cdouble holo = psi.at(s)[x * r + y];
            cdouble anti = phib.at(s)[x * r + y];
            for (int z = 0; z < r; ++z) {
              holo += a[x * r + z] * ff[z * r + y] - ff[x * r + z] * a[z * r + y];
              if (aj) anti += aj[x * r + z] * ff[z * r + y] - ff[x * r + z] * aj[z * r + y];
            }
            acc += std::norm(holo) + std::norm(anti);
          }
        out.v[s] += 0.5 * acc;
      });
    }
  }
  return out;
}

ScalarField graph_laplacian(const LatticeChart& g, const ScalarField& f) {
  ScalarField out(f.sites);
  for (int k = 0; k < g.naxes(); ++k) {
    const LatticeChart::Axis ax = g.axis(k);
    const double w = 1.0 / (ax.h * ax.h);
    const std::size_t L = static_cast<std::size_t>(ax.length);
    const std::size_t inner = ax.stride;
    const std::size_t rowspan = L * inner;
    const std::size_t nlines = f.sites / rowspan;
    for (std::size_t line = 0; line < nlines; ++line) {
      const std::size_t base = line * rowspan;
      for (std::size_t l = 0; l < L; ++l)
        for (std::size_t i = 0; i < inner; ++i) {
          const std::size_t idx = base + l * inner + i;
          double acc = 0;
          if (l + 1 < L)
            acc += f.v[idx] - f.v[idx + inner];
          else if (ax.periodic)
            acc += f.v[idx] - f.v[base + i];
          if (l > 0)
            acc += f.v[idx] - f.v[idx - inner];
          else if (ax.periodic)
            acc += f.v[idx] - f.v[base + (L - 1) * inner + i];
          out.v[idx] += w * acc;
        }
    }
  }
  return out;
}

double scalar_dot(const LatticeChart& g, const ScalarField& a, const ScalarField& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.sites; ++i) s += a.v[i] * b.v[i];
  return s * g.cell_volume();
}

double grad_dot(const LatticeChart& g, const ScalarField& a, const ScalarField& b) {
  double s = 0;
  for (int k = 0; k < g.naxes(); ++k) {
    const LatticeChart::Axis ax = g.axis(k);
    const double w = 1.0 / (ax.h * ax.h);
    const std::size_t L = static_cast<std::size_t>(ax.length);
    const std::size_t inner = ax.stride;
    const std::size_t rowspan = L * inner;
    const std::size_t nlines = a.sites / rowspan;
    for (std::size_t line = 0; line < nlines; ++line) {
      const std::size_t base = line * rowspan;
      for (std::size_t l = 0; l < L; ++l) {
        if (l + 1 == L && !ax.periodic) continue;
        const std::size_t nxt = (l + 1 < L) ? l + 1 : 0;
        for (std::size_t i = 0; i < inner; ++i) {
          const std::size_t x0 = base + l * inner + i;
          const std::size_t x1 = base + nxt * inner + i;
          s += w * (a.v[x1] - a.v[x0]) * (b.v[x1] - b.v[x0]);
        }
      }
    }
  }
  return s * g.cell_volume();
}

ScalarField curvature_norm2_field(const LatticeChart& g, const CurvatureField& f,
                                  const EndoField& h, const EndoField& hinv) {
  (void)g;
  const int r = f.r;
  ScalarField out(f.sites);
  parallel_for(f.sites, [&](std::size_t s) {
    std::vector<cdouble> t1(r * r), t2(r * r), t3(r * r);
    double acc = 0;
    for (int j = 0; j < f.n; ++j)
      for (int k = 0; k < f.n; ++k) {
        const cdouble* m = f.at(s, j, k);
        // tr(M (H^{-1} M^dagger H))
        mat_adjoint(t1.data(), m, r);
        mat_mul(t2.data(), hinv.at(s), t1.data(), r);
        mat_mul(t3.data(), t2.data(), h.at(s), r);
        cdouble tr(0);
        for (int x = 0; x < r; ++x)
          for (int z = 0; z < r; ++z) tr += m[x * r + z] * t3[z * r + x];
        acc += 4.0 * tr.real();
      }
    out.v[s] = acc;
  });
  return out;
}

double l2_of_scalar(const LatticeChart& g, const ScalarField& f) {
  double s = 0;
  for (double x : f.v) s += x;
  return s * g.cell_volume();
}

namespace {

// tiny wedge engine over 2n <= 6 real axes with complex coefficients,
// used once per dimension to tabulate the Hodge-Riemann pairing
struct RealForm {
  std::map<uint32_t, cdouble> t;
  void add(uint32_t m, cdouble c) {
    auto it = t.find(m);
    if (it == t.end())
      t.emplace(m, c);
    else {
      it->second += c;
      if (std::abs(it->second) == 0.0) t.erase(it);
    }
  }
};

int sign_merge(uint32_t a, uint32_t b) {
  int inv = 0;
  for (int i = 0; i < 8; ++i)
    if (a & (1u << i)) inv += __builtin_popcount(b & ((1u << i) - 1));
  return (inv & 1) ? -1 : 1;
}

RealForm wedge_rf(const RealForm& x, const RealForm& y) {
  RealForm r;
  for (const auto& [ma, ca] : x.t)
    for (const auto& [mb, cb] : y.t) {
      if (ma & mb) continue;
      r.add(ma | mb, static_cast<double>(sign_merge(ma, mb)) * ca * cb);
    }
  return r;
}

// coefficient table c[j][k][l][m] of dw_j^dwbar_k^dw_l^dwbar_m^omega^{n-2}
// against dvol (axes ordered u1 v1 u2 v2 ...)
struct HRTable {
  int n;
  std::vector<cdouble> c;  // n^4
  cdouble& at(int j, int k, int l, int m) { return c[((j * n + k) * n + l) * n + m]; }
  cdouble at(int j, int k, int l, int m) const { return c[((j * n + k) * n + l) * n + m]; }
};

const HRTable& hr_table(int n) {
  static std::map<int, HRTable> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  HRTable tbl;
  tbl.n = n;
  tbl.c.assign(static_cast<size_t>(n) * n * n * n, cdouble(0));
  auto u = [&](int j) { return 1u << (2 * j); };
  auto v = [&](int j) { return 1u << (2 * j + 1); };
  RealForm omega;
  for (int j = 0; j < n; ++j) omega.add(u(j) | v(j), cdouble(1, 0));
  RealForm omega_pow;
  omega_pow.add(0, cdouble(1, 0));
  for (int p = 0; p < n - 2; ++p) omega_pow = wedge_rf(omega_pow, omega);
  const uint32_t top = (1u << (2 * n)) - 1;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
          // dw_j ^ dwbar_k = u_j u_k + v_j v_k + i (v_j u_k - u_j v_k)
          RealForm a, b;
          auto fill = [&](RealForm& f, int p, int q) {
            if (p != q) {
              f.add(u(p) | u(q), cdouble(sign_merge(u(p), u(q)), 0));
              f.add(v(p) | v(q), cdouble(sign_merge(v(p), v(q)), 0));
            }
            f.add(v(p) | u(q), cdouble(0, sign_merge(v(p), u(q))));
            f.add(u(p) | v(q), cdouble(0, -sign_merge(u(p), v(q))));
          };
          fill(a, j, k);
          fill(b, l, m);
          RealForm w = wedge_rf(wedge_rf(a, b), omega_pow);
          auto itw = w.t.find(top);
          if (itw != w.t.end()) tbl.at(j, k, l, m) = itw->second;
        }
  return cache.emplace(n, std::move(tbl)).first->second;
}

double norm2_H(const cdouble* m, const cdouble* h, const cdouble* hinv, int r,
               std::vector<cdouble>& t1, std::vector<cdouble>& t2, std::vector<cdouble>& t3) {
  mat_adjoint(t1.data(), m, r);
  mat_mul(t2.data(), hinv, t1.data(), r);
  mat_mul(t3.data(), t2.data(), h, r);
  cdouble tr(0);
  for (int x = 0; x < r; ++x)
    for (int z = 0; z < r; ++z) tr += m[x * r + z] * t3[z * r + x];
  return tr.real();
}

}  // namespace

void hodge_riemann_sides(int n, int r, const cdouble* fcomp, const cdouble* hmat,
                         double* lhs, double* rhs) {
  const HRTable& tbl = hr_table(n);
  std::vector<cdouble> hinv(r * r), t1(r * r), t2(r * r), t3(r * r);
  mat_inverse(hinv.data(), hmat, r);
  // dvol = omega^n / n!; the table holds the coefficient against the raw top
  // basis form, and omega^n = n! * (top), so no extra factor appears
  cdouble left(0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
          cdouble w = tbl.at(j, k, l, m);
          if (w == cdouble(0)) continue;
          const cdouble* A = fcomp + (static_cast<size_t>(j) * n + k) * r * r;
          const cdouble* B = fcomp + (static_cast<size_t>(l) * n + m) * r * r;
          cdouble tr(0);
          for (int x = 0; x < r; ++x)
            for (int z = 0; z < r; ++z) tr += A[x * r + z] * B[z * r + x];
          left += w * tr;
        }
  *lhs = left.real();

  double f2 = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      f2 += 4.0 * norm2_H(fcomp + (static_cast<size_t>(j) * n + k) * r * r, hmat, hinv.data(), r,
                          t1, t2, t3);
  // F_hat = -2i sum_j F_{j jbar}
  std::vector<cdouble> fh(r * r, cdouble(0));
  for (int j = 0; j < n; ++j) {
    const cdouble* d = fcomp + (static_cast<size_t>(j) * n + j) * r * r;
    for (int t = 0; t < r * r; ++t) fh[t] += cdouble(0, -2.0) * d[t];
  }
  double fhat2 = norm2_H(fh.data(), hmat, hinv.data(), r, t1, t2, t3);
  double fperp2 = f2 - fhat2 / n;
  double factorial = 1;
  for (int k = 2; k < n; ++k) factorial *= k;
  *rhs = fperp2 - (factorial / n) * fhat2;
}


double discrete_charge(const LatticeChart& g, const CurvatureField& f, const EndoField& h) {
  double acc = 0;
  for (std::size_t s = 0; s < f.sites; ++s) {
    double lhs, rhs;
    hodge_riemann_sides(f.n, f.r, f.at(s, 0, 0), h.at(s), &lhs, &rhs);
    acc += lhs;
  }
  return acc * g.cell_volume();
}


}  // namespace g2flow
