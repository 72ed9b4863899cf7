#include "g2flow/donaldson.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "g2flow/parallel.hpp"
#include "g2flow/smallmat.hpp"

namespace g2flow {

double donaldson_cn(int ncomplex) {
  double c = 4.0;
  for (int k = 2; k < ncomplex; ++k) c *= k;
  return c;
}

CurvatureField theta_eval(const LatticeChart& g, const EndoField& h, const EndoField& k,
                          const CurvatureField& f) {
  const int r = h.r;
  EndoField hinv = field_inverse(g, h);
  CurvatureField out(f.sites, f.n, 1);
  parallel_for(f.sites, [&](std::size_t s) {
    std::vector<cdouble> hk(r * r);
    mat_mul(hk.data(), hinv.at(s), k.at(s), r);
    for (int a = 0; a < f.n; ++a)
      for (int b = 0; b < f.n; ++b) {
        const cdouble* m = f.at(s, a, b);
        cdouble tr(0);
        for (int x = 0; x < r; ++x)
          for (int z = 0; z < r; ++z) tr += hk[x * r + z] * m[z * r + x];
        *out.at(s, a, b) = cdouble(0, 2) * tr;
      }
  });
  return out;
}

namespace {

// (n-1)! * sum_sites 2i tr(q F_hat) vol for a fixed endomorphism field q
double rho_from_fhat(const LatticeChart& g, const EndoField& q, const EndoField& fhat) {
  const int r = q.r;
  double factorial = 1;
  for (int k = 2; k < g.ncomplex(); ++k) factorial *= k;
  double acc = 0;
  for (std::size_t s = 0; s < q.sites; ++s) {
    const cdouble* a = q.at(s);
    const cdouble* b = fhat.at(s);
    cdouble tr(0);
    for (int x = 0; x < r; ++x)
      for (int z = 0; z < r; ++z) tr += a[x * r + z] * b[z * r + x];
    acc += (cdouble(0, 2) * tr).real();
  }
  return factorial * acc * g.cell_volume();
}

EndoField geodesic_point(const EndoField& h0, const EndoField& xi, double ell) {
  const int r = h0.r;
  EndoField h(h0.sites, r);
  parallel_for(h0.sites, [&](std::size_t s) {
    std::vector<cdouble> x(r * r), e(r * r);
    for (int t = 0; t < r * r; ++t) x[t] = ell * xi.at(s)[t];
    mat_exp(e.data(), x.data(), r);
    mat_mul(h.at(s), h0.at(s), e.data(), r);
  });
  return h;
}

// Simpson integral of rho along the geodesic with a fixed odd sample count
double n_geodesic_fixed(const LatticeChart& g, const HolomorphicTwist& tw, const EndoField& h0,
                        const EndoField& xi, int samples) {
  if (samples < 3 || samples % 2 == 0)
    throw std::invalid_argument("n_geodesic_fixed: need an odd sample count >= 3");
  const double hstep = 1.0 / (samples - 1);
  double acc = 0;
  for (int i = 0; i < samples; ++i) {
    const double ell = i * hstep;
    EndoField hl = geodesic_point(h0, xi, ell);
    CurvatureField f = curvature(g, hl, tw);
    EndoField fhat = lambda_contract(f);
    const double rho = rho_from_fhat(g, xi, fhat);
    const double w = (i == 0 || i == samples - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * rho;
  }
  return acc * hstep / 3.0;
}

}  // namespace

double rho_eval(const LatticeChart& g, const EndoField& h, const EndoField& k,
                const HolomorphicTwist& tw) {
  CurvatureField f = curvature(g, h, tw);
  EndoField fhat = lambda_contract(f);
  EndoField hinv = field_inverse(g, h);
  EndoField q(h.sites, h.r);
  field_mat_mul(q, hinv, k);
  return rho_from_fhat(g, q, fhat);
}

QuadratureResult n_functional_geodesic(const LatticeChart& g, const HolomorphicTwist& tw,
                                       const EndoField& h0, const EndoField& h, int samples,
                                       double rel_tol, int max_doublings) {
  EndoField xi = log_relative(h, h0);
  QuadratureResult res;
  double prev = n_geodesic_fixed(g, tw, h0, xi, samples);
  res.samples = samples;
  for (int d = 0; d < max_doublings; ++d) {
    const int next = 2 * samples - 1;
    double cur = n_geodesic_fixed(g, tw, h0, xi, next);
    res.est_error = std::abs(cur - prev);
    samples = next;
    prev = cur;
    res.samples = samples;
    if (res.est_error <= rel_tol * (1.0 + std::abs(cur))) {
      res.value = cur;
      res.converged = true;
      return res;
    }
  }
  res.value = prev;
  res.converged = res.est_error <= rel_tol * (1.0 + std::abs(prev));
  return res;
}

PathIndependence path_independence_check(const LatticeChart& g, const HolomorphicTwist& tw,
                                         const EndoField& h0, const EndoField& h,
                                         const EndoField& hmid, int samples) {
  PathIndependence out;
  EndoField xi_direct = log_relative(h, h0);
  EndoField xi_leg1 = log_relative(hmid, h0);
  EndoField xi_leg2 = log_relative(h, hmid);
  out.direct = n_geodesic_fixed(g, tw, h0, xi_direct, samples);
  out.two_leg = n_geodesic_fixed(g, tw, h0, xi_leg1, samples) +
                n_geodesic_fixed(g, tw, hmid, xi_leg2, samples);
  out.discrepancy = std::abs(out.direct - out.two_leg);
  return out;
}

ConvexitySamples m_convexity(const LatticeChart& g, const HolomorphicTwist& tw,
                             const EndoField& h0, const EndoField& h, int si, int ai,
                             int samples) {
  if (g.Ns == 0) throw std::invalid_argument("m_convexity: cylinder chart required");
  if (samples < 3 || samples % 2 == 0)
    throw std::invalid_argument("m_convexity: need an odd sample count >= 3");
  LatticeChart cs = g.cross_section();
  HolomorphicTwist stw = slice_twist(g, tw, si, ai);
  EndoField h0s = slice_endo(g, h0, si, ai);
  EndoField hs = slice_endo(g, h, si, ai);
  EndoField xi = log_relative(hs, h0s);
  const int r = h0s.r;
  double factorial = 1;
  for (int k = 2; k < cs.ncomplex(); ++k) factorial *= k;

  ConvexitySamples out;
  const double hstep = 1.0 / (samples - 1);
  out.ell.resize(samples);
  out.m1.resize(samples);
  out.m2.resize(samples);
  out.m.resize(samples);
  for (int i = 0; i < samples; ++i) {
    const double ell = i * hstep;
    out.ell[i] = ell;
    EndoField hl = geodesic_point(h0s, xi, ell);
    CurvatureField f = curvature(cs, hl, stw);
    EndoField fhat = lambda_contract(f);
    out.m1[i] = rho_from_fhat(cs, xi, fhat);

    // second derivative in the manifestly nonnegative form
    // 2 (m-1)! sum_{orientations} sum_j ||d_{l,j} xi||^2_{H_l} vol
    // (the orientation pair matches the staggered curvature composites)
    EndoField hinv = field_inverse(cs, hl);
    double m2 = 0;
    for (Stencil st : {Stencil::forward, Stencil::backward}) {
      std::vector<EndoField> A = chern_potential(cs, hl, hinv, stw, st);
      for (int j = 0; j < cs.ncomplex(); ++j) {
        EndoField psi = deriv_holo(cs, xi, j, st);
        for (std::size_t s = 0; s < psi.sites; ++s) {
          std::vector<cdouble> full(r * r), t1(r * r), t2(r * r), t3(r * r);
          const cdouble* aj = A[j].at(s);
          const cdouble* x = xi.at(s);
          for (int p = 0; p < r; ++p)
            for (int q = 0; q < r; ++q) {
              cdouble acc = psi.at(s)[p * r + q];
              for (int z = 0; z < r; ++z)
                acc += aj[p * r + z] * x[z * r + q] - x[p * r + z] * aj[z * r + q];
              full[p * r + q] = acc;
            }
          // ||M||^2_H = Re tr(M H^{-1} M^dag H)
          mat_adjoint(t1.data(), full.data(), r);
          mat_mul(t2.data(), hinv.at(s), t1.data(), r);
          mat_mul(t3.data(), t2.data(), hl.at(s), r);
          cdouble tr(0);
          for (int p = 0; p < r; ++p)
            for (int z = 0; z < r; ++z) tr += full[p * r + z] * t3[z * r + p];
          m2 += tr.real();
        }
      }
    }
    out.m2[i] = 2.0 * factorial * m2 * cs.cell_volume();
  }
  // cumulative integral of m1 (trapezoid on the sample grid)
  out.m[0] = 0;
  for (int i = 1; i < samples; ++i)
    out.m[i] = out.m[i - 1] + 0.5 * hstep * (out.m1[i - 1] + out.m1[i]);
  // Simpson value for m(1)
  double acc = 0;
  for (int i = 0; i < samples; ++i) {
    const double w = (i == 0 || i == samples - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * out.m1[i];
  }
  out.n_slice = acc * hstep / 3.0;
  return out;
}

double n_slice(const LatticeChart& g, const HolomorphicTwist& tw, const EndoField& h0,
               const EndoField& h, int si, int ai, int samples) {
  return m_convexity(g, tw, h0, h, si, ai, samples).n_slice;
}

}  // namespace g2flow
