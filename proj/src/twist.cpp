#include "g2flow/twist.hpp"

#include <cmath>
#include <cstring>
#include <vector>

#include "g2flow/ops.hpp"
#include "g2flow/parallel.hpp"
#include "g2flow/prng.hpp"
#include "g2flow/smallmat.hpp"

namespace g2flow {

namespace {

// smooth random band-limited complex scalar field with the e^{-decay s}
// envelope down the tube
EndoField random_profile(const LatticeChart& g, Prng& rng, double amp, double decay) {
  EndoField f(g.nsites(), 1);
  const std::size_t ts = g.torus_sites();
  const int nmode = 2;
  // torus trig polynomial coefficients
  std::vector<cdouble> cx(2 * nmode + 1), cy(2 * nmode + 1);
  for (auto& c : cx) c = rng.cgaussian();
  for (auto& c : cy) c = rng.cgaussian();
  const double two_pi = 6.283185307179586476925287;
  const int nsl = g.Ns > 0 ? g.Ns : 1;
  const int nal = g.Ns > 0 ? g.Nalpha : 1;
  for (int si = 0; si < nsl; ++si)
    for (int ai = 0; ai < nal; ++ai) {
      const double s = si * g.hs;
      const double alpha = ai * g.halpha;
      cdouble tube(1.0, 0.0);
      if (g.Ns > 0) tube = std::exp(cdouble(-decay * s, -alpha));
      std::size_t base = g.Ns > 0 ? g.slice_start(si, ai) : 0;
      for (std::size_t t = 0; t < ts; ++t) {
        std::size_t rest = t;
        cdouble val(0);
        for (int k = 0; k < 2 * g.m; ++k) {
          int xi = static_cast<int>(rest % g.nD);
          rest /= g.nD;
          double ang = two_pi * xi / g.nD;
          const auto& cs = (k % 2 == 0) ? cx : cy;
          cdouble row(0);
          for (int mo = -nmode; mo <= nmode; ++mo)
            row += cs[mo + nmode] * std::exp(cdouble(0.0, mo * ang));
          val += row;
        }
        f.v[base + t] = amp * tube * val / static_cast<double>(2 * g.m);
      }
    }
  return f;
}

void hermitian_traceless(Prng& rng, cdouble* m, int r) {
  rng.hermitian(m, r, 1.0);
  cdouble tr = mat_trace(m, r) / static_cast<double>(r);
  for (int i = 0; i < r; ++i) m[i * r + i] -= tr;
  double n = std::sqrt(mat_frob2(m, r));
  for (int i = 0; i < r * r; ++i) m[i] /= n;
}

}  // namespace

HolomorphicTwist HolomorphicTwist::none(const LatticeChart& g, int rank) {
  HolomorphicTwist tw;
  tw.a = OneFormField(g.nsites(), g.ncomplex(), rank);
  tw.zero = true;
  return tw;
}

HolomorphicTwist HolomorphicTwist::exact(const LatticeChart& g, int rank, uint64_t seed,
                                         double amp, double decay) {
  Prng rng(seed);
  const int n = g.ncomplex();
  HolomorphicTwist tw;
  tw.zero = (amp == 0.0);
  tw.decay = decay;
  tw.a = OneFormField(g.nsites(), n, rank);
  if (tw.zero) return tw;

  EndoField f = random_profile(g, rng, amp, decay);
  std::vector<cdouble> m(rank * rank);
  if (rank == 1)
    m[0] = cdouble(1, 0);
  else
    hermitian_traceless(rng, m.data(), rank);

  for (int j = 0; j < n; ++j) {
    EndoField df = deriv_anti(g, f, j);
    parallel_for(g.nsites(), [&](std::size_t s) {
      cdouble* out = tw.a.at(s, j);
      for (int t = 0; t < rank * rank; ++t) out[t] = df.v[s] * m[t];
    });
  }
  return tw;
}

HolomorphicTwist HolomorphicTwist::gauge(const LatticeChart& g, int rank, uint64_t seed,
                                         double amp, double decay) {
  Prng rng(seed);
  const int n = g.ncomplex();
  HolomorphicTwist tw;
  tw.zero = (amp == 0.0);
  tw.decay = decay;
  tw.a = OneFormField(g.nsites(), n, rank);
  if (tw.zero) return tw;

  EndoField f1 = random_profile(g, rng, amp, decay);
  EndoField f2 = random_profile(g, rng, amp, decay);
  std::vector<cdouble> m1(rank * rank), m2(rank * rank);
  if (rank == 1) {
    m1[0] = cdouble(1, 0);
    m2[0] = cdouble(0.3, 0.1);
  } else {
    hermitian_traceless(rng, m1.data(), rank);
    hermitian_traceless(rng, m2.data(), rank);
  }

  EndoField gfield(g.nsites(), rank);
  parallel_for(g.nsites(), [&](std::size_t s) {
    std::vector<cdouble> chi(rank * rank);
    for (int t = 0; t < rank * rank; ++t) chi[t] = f1.v[s] * m1[t] + f2.v[s] * m2[t];
    mat_exp(gfield.at(s), chi.data(), rank);
  });
  EndoField ginv = field_inverse(g, gfield);
  for (int j = 0; j < n; ++j) {
    EndoField dg = deriv_anti(g, gfield, j);
    parallel_for(g.nsites(), [&](std::size_t s) {
      cdouble* out = tw.a.at(s, j);
      mat_mul(out, ginv.at(s), dg.at(s), rank);
      // the discrete g^{-1} dbar g of a unimodular g keeps an O(h^2) trace
      // residue; project it out so the determinant line stays flat and the
      // det-1 flow mode remains compatible with the discrete HYM equation
      cdouble tr = mat_trace(out, rank) / static_cast<double>(rank);
      for (int i = 0; i < rank; ++i) out[i * rank + i] -= tr;
    });
  }
  return tw;
}

double HolomorphicTwist::integrability_residual(const LatticeChart& g) const {
  if (zero) return 0.0;
  const int n = g.ncomplex();
  const int r = a.r;
  double worst = 0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      EndoField aj(g.nsites(), r), ak(g.nsites(), r);
      for (std::size_t s = 0; s < g.nsites(); ++s) {
        std::memcpy(aj.at(s), a.at(s, j), sizeof(cdouble) * r * r);
        std::memcpy(ak.at(s), a.at(s, k), sizeof(cdouble) * r * r);
      }
      EndoField d1 = deriv_anti(g, ak, j);
      EndoField d2 = deriv_anti(g, aj, k);
      for (std::size_t s = 0; s < g.nsites(); ++s) {
        std::vector<cdouble> res(r * r);
        for (int t = 0; t < r * r; ++t) res[t] = d1.at(s)[t] - d2.at(s)[t];
        for (int x = 0; x < r; ++x)
          for (int y = 0; y < r; ++y) {
            cdouble acc(0);
            for (int z = 0; z < r; ++z)
              acc += aj.at(s)[x * r + z] * ak.at(s)[z * r + y] -
                     ak.at(s)[x * r + z] * aj.at(s)[z * r + y];
            res[x * r + y] += acc;
          }
        double nrm = 0;
        for (int t = 0; t < r * r; ++t) nrm += std::norm(res[t]);
        worst = std::max(worst, std::sqrt(nrm));
      }
    }
  return worst;
}

double HolomorphicTwist::envelope_constant(const LatticeChart& g) const {
  if (zero) return 0.0;
  const int r = a.r;
  double worst = 0;
  for (std::size_t s = 0; s < g.nsites(); ++s) {
    double nrm = 0;
    for (int j = 0; j < a.n; ++j) {
      const cdouble* m = a.at(s, j);
      for (int t = 0; t < r * r; ++t) nrm += std::norm(m[t]);
    }
    worst = std::max(worst, std::sqrt(nrm) * std::exp(decay * g.s_of(s)));
  }
  return worst;
}

}  // namespace g2flow
