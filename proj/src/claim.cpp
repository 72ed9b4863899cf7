#include "g2flow/claim.hpp"

#include <algorithm>
#include <cmath>

#include "g2flow/donaldson.hpp"
#include "g2flow/prng.hpp"

namespace g2flow {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;

// multi-index coordinates of a site
std::vector<int> site_coords(const LatticeChart& g, std::size_t site) {
  std::vector<int> c(g.naxes(), 0);
  std::size_t rest = site;
  const std::size_t ts = g.torus_sites();
  std::size_t t = rest;
  if (g.Ns > 0) {
    const std::size_t slab = ts * static_cast<std::size_t>(g.Nalpha);
    c[2 * g.m + 1] = static_cast<int>(rest / slab);  // s
    rest %= slab;
    c[2 * g.m] = static_cast<int>(rest / ts);  // alpha
    t = rest % ts;
  }
  for (int k = 0; k < 2 * g.m; ++k) {
    c[k] = static_cast<int>(t % g.nD);
    t /= g.nD;
  }
  return c;
}
}  // namespace

double fhat_l1_norm(const LatticeChart& g, const EndoField& h, const HolomorphicTwist& tw) {
  CurvatureField f = curvature(g, h, tw);
  ScalarField eh = e_hat_field(lambda_contract(f));
  double acc = 0;
  for (double v : eh.v) acc += std::sqrt(v);
  return acc * g.cell_volume();
}

WeakBetaReport weak_laplacian_beta(const LatticeChart& g,
                                   const std::vector<ScalarField>& lambda_fields,
                                   const std::vector<double>& fhat_l1_series, uint64_t seed,
                                   int nbumps) {
  WeakBetaReport rep;
  double sup_run = 0;
  for (double e : fhat_l1_series) sup_run = std::max(sup_run, e);
  const double l1_0 = fhat_l1_series.empty() ? 0.0 : fhat_l1_series.front();
  rep.beta = 2.0 * (sup_run + l1_0);
  if (rep.beta <= 0) rep.beta = 1e-300;

  Prng rng(seed);
  rep.bank_size = nbumps;
  for (int b = 0; b < nbumps; ++b) {
    // product cos^2 bump of small support, kept off the s-boundaries
    ScalarField phi(g.nsites());
    std::vector<int> center(g.naxes()), width(g.naxes());
    for (int k = 0; k < g.naxes(); ++k) {
      const auto ax = g.axis(k);
      width[k] = std::max(2, static_cast<int>(rng.uniform_int(2, std::max(2, ax.length / 4))));
      int lo = ax.periodic ? 0 : width[k] + 1;
      int hi = ax.periodic ? ax.length - 1 : ax.length - width[k] - 2;
      if (hi < lo) hi = lo;
      center[k] = static_cast<int>(rng.uniform_int(lo, hi));
    }
    double maxphi = 0;
    for (std::size_t s = 0; s < g.nsites(); ++s) {
      auto c = site_coords(g, s);
      double val = 1;
      for (int k = 0; k < g.naxes(); ++k) {
        const auto ax = g.axis(k);
        int d = std::abs(c[k] - center[k]);
        if (ax.periodic) d = std::min(d, ax.length - d);
        if (d >= width[k]) {
          val = 0;
          break;
        }
        double u = std::cos(0.5 * 3.14159265358979323846 * d / width[k]);
        val *= u * u;
      }
      phi.v[s] = val;
      maxphi = std::max(maxphi, val);
    }
    if (maxphi == 0) continue;
    for (const ScalarField& lb : lambda_fields) {
      ScalarField lap = graph_laplacian(g, phi);
      double integral = scalar_dot(g, lb, lap);
      double ratio = integral / (rep.beta * maxphi);
      rep.worst_ratio = std::max(rep.worst_ratio, ratio);
      if (integral > rep.beta * maxphi * (1.0 + 1e-8) + 1e-12) ++rep.bank_violations;
    }
  }
  return rep;
}

ParabolaReport parabola_check(const LatticeChart& g, const std::vector<double>& ell_profile,
                              double beta, double eps) {
  ParabolaReport rep;
  rep.beta = beta;
  rep.eps = eps;
  if (ell_profile.empty()) {
    rep.vacuous = true;
    return rep;
  }
  double L = 0;
  for (double v : ell_profile) L = std::max(L, v);
  rep.L = L;
  if (L < 1e-13 || beta <= 0) {
    rep.vacuous = true;
    return rep;
  }
  // furthest slice attaining the sup (within rounding)
  int sidx = 0;
  for (int i = 0; i < static_cast<int>(ell_profile.size()); ++i)
    if (ell_profile[i] >= L * (1.0 - 1e-12)) sidx = i;
  rep.s_index = sidx;
  rep.S = sidx * g.hs;
  rep.delta_plus = 0.5 * (std::sqrt(1.0 + (8.0 / beta) * (1.0 - eps) * L) - 1.0);
  const double s_hi = rep.S + rep.delta_plus;
  for (int i = sidx; i < static_cast<int>(ell_profile.size()); ++i) {
    const double s = i * g.hs;
    if (s > s_hi + 1e-15) break;
    ++rep.checked;
    const double ds = s - rep.S;
    const double p = rep.L - 0.5 * beta * ds * (ds + 1.0);
    if (ell_profile[i] < p - 1e-8) ++rep.violations;
    if (eps > 0 && ell_profile[i] < eps * L - 1e-8) ++rep.eps_violations;
  }
  return rep;
}

namespace {

// slab slice range [S, S + delta_plus] on the s grid
std::pair<int, int> slab_range(const LatticeChart& g, const ParabolaReport& p) {
  int lo = p.s_index;
  int hi = std::min(g.Ns - 1, static_cast<int>(std::floor((p.S + p.delta_plus) / g.hs + 1e-12)));
  return {lo, hi};
}

}  // namespace

double measure_moser_kprime(const LatticeChart& g, const ScalarField& lambda_field,
                            const std::vector<double>& ell_profile, double beta, double eps,
                            double x) {
  ParabolaReport p = parabola_check(g, ell_profile, beta, eps);
  if (p.vacuous) return 0.0;
  auto [lo, hi] = slab_range(g, p);
  const std::size_t ts = g.torus_sites();
  // unit cylinder: s-window of length 1/(2pi), alpha full circle, half torus
  const int s_halfwin = std::max(0, static_cast<int>(std::floor(0.5 / (kTwoPi * g.hs))));
  double kprime = 1e300;
  for (int si = lo; si <= hi; ++si) {
    // argmax site on the s-slab
    double best = -1;
    std::size_t best_site = 0;
    for (int ai = 0; ai < g.Nalpha; ++ai) {
      std::size_t base = g.slice_start(si, ai);
      for (std::size_t t = 0; t < ts; ++t)
        if (lambda_field.v[base + t] > best) {
          best = lambda_field.v[base + t];
          best_site = base + t;
        }
    }
    if (best <= 0) continue;
    auto cc = site_coords(g, best_site);
    // half-volume cross-section box: half the torus span in the first
    // direction, full span in the others, centered on the argmax
    const int halfw = g.nD / 4;
    double sum = 0, mx = 0;
    std::size_t count = 0;
    for (int ds = -s_halfwin; ds <= s_halfwin; ++ds) {
      int sj = si + ds;
      if (sj < 0 || sj >= g.Ns) continue;
      for (int ai = 0; ai < g.Nalpha; ++ai) {
        std::size_t base = g.slice_start(sj, ai);
        for (std::size_t t = 0; t < ts; ++t) {
          auto tc = site_coords(g, base + t);
          int d = std::abs(tc[0] - cc[0]);
          d = std::min(d, g.nD - d);
          const bool inside = d <= halfw;
          if (!inside) continue;
          double v = lambda_field.v[base + t];
          sum += std::pow(v, 1.0 + x);
          mx = std::max(mx, v);
          ++count;
        }
      }
    }
    if (count == 0 || mx <= 0) continue;
    const double avg = sum / static_cast<double>(count);
    kprime = std::min(kprime, avg / std::pow(mx, 1.0 + x));
  }
  return kprime == 1e300 ? 0.0 : kprime;
}

MoserReport moser_slab_check(const LatticeChart& g, const ScalarField& lambda_field,
                             const std::vector<double>& ell_profile, double beta, double eps,
                             double x, double k_prime_frozen) {
  MoserReport rep;
  rep.k_prime = k_prime_frozen;
  ParabolaReport p = parabola_check(g, ell_profile, beta, eps);
  rep.L = p.L;
  rep.delta_plus = p.delta_plus;
  if (p.vacuous) {
    rep.vacuous = true;
    rep.pass = true;
    return rep;
  }
  auto [lo, hi] = slab_range(g, p);
  const std::size_t slab = g.torus_sites() * static_cast<std::size_t>(g.Nalpha);
  double lhs = 0;
  for (int si = lo; si <= hi; ++si) {
    for (std::size_t t = 0; t < slab; ++t) {
      double v = lambda_field.v[g.slice_start(si, 0) + t];
      lhs += std::pow(v, 1.0 + x);
    }
  }
  rep.lhs = lhs * g.cell_volume();
  double vol_d = 1;
  for (int k = 0; k < 2 * g.m; ++k) vol_d *= g.nD * g.hD;
  rep.k_eps_x = 3.14159265358979323846 * k_prime_frozen * std::pow(eps, 1.0 + x) * vol_d;
  rep.rhs = rep.k_eps_x * rep.delta_plus * std::pow(rep.L, 1.0 + x);
  rep.pass = rep.lhs >= rep.rhs * (1.0 - 1e-9);
  rep.margin = rep.rhs > 0 ? rep.lhs / rep.rhs - 1.0 : 0.0;
  return rep;
}

LpReport lp_interpolation_check(const LatticeChart& torus, const ScalarField& f, double p,
                                double x) {
  LpReport rep;
  const double vol = torus.cell_volume();
  double volD = 0, sp = 0, s1x = 0, F = 0;
  for (double v : f.v) {
    volD += vol;
    sp += std::pow(v, p) * vol;
    s1x += std::pow(v, 1.0 + x) * vol;
    F = std::max(F, v);
  }
  rep.k_p = std::pow(volD, 1.0 / p - 1.0);
  rep.lhs = std::pow(sp, 1.0 / p);
  rep.rhs = F > 0 ? rep.k_p / std::pow(F, x) * s1x : 0.0;
  rep.pass = rep.lhs >= rep.rhs * (1.0 - 1e-12);
  return rep;
}

ClaimReport claim_lower_bound(const LatticeChart& g, const HolomorphicTwist& tw,
                              const EndoField& h0, const EndoField& h_t, double beta, double eps,
                              double x) {
  ClaimReport rep;
  rep.beta = beta;
  rep.eps = eps;
  rep.x = x;
  ScalarField lb = lambda_bar_field(h_t, h0);
  std::vector<double> prof(g.Ns, 0.0);
  const std::size_t slab = g.torus_sites() * static_cast<std::size_t>(g.Nalpha);
  for (std::size_t s = 0; s < lb.sites; ++s)
    prof[s / slab] = std::max(prof[s / slab], lb.v[s]);
  ParabolaReport p = parabola_check(g, prof, beta, eps);
  rep.L = p.L;
  rep.S = p.S;
  rep.delta_plus_eps = p.delta_plus;
  rep.parabola_violations = parabola_check(g, prof, beta, 0.0).violations;
  if (p.vacuous) {
    rep.vacuous = true;
    return rep;
  }
  auto [lo, hi] = slab_range(g, p);
  rep.mu_A = (hi - lo + 1) * g.hs * (g.Nalpha * g.halpha);
  rep.mu_over_sqrt_l = rep.L > 0 ? rep.mu_A / std::sqrt(rep.L) : 0.0;

  // slab energy: sum over (s,alpha) in A of || restricted F_hat ||^2_{L2(D_z)}
  double vol_d_cell = 1;
  for (int k = 0; k < 2 * g.m; ++k) vol_d_cell *= g.hD;
  LatticeChart cs = g.cross_section();
  double slab_energy = 0;
  double c_z = 1e300;
  double k_prime_stab = 1e300;
  double vol_d = 1;
  for (int k = 0; k < 2 * g.m; ++k) vol_d *= g.nD * g.hD;
  for (int si = lo; si <= hi; ++si)
    for (int ai = 0; ai < g.Nalpha; ++ai) {
      HolomorphicTwist stw = slice_twist(g, tw, si, ai);
      EndoField hs = slice_endo(g, h_t, si, ai);
      EndoField h0s = slice_endo(g, h0, si, ai);
      CurvatureField f = curvature(cs, hs, stw);
      EndoField fhat = lambda_contract(f);
      ScalarField eh = e_hat_field(fhat);
      double fhat_l2sq = l2_of_scalar(cs, eh);
      slab_energy += fhat_l2sq;

      // measured stability constants on this slice
      EndoField xi = log_relative(hs, h0s);
      double xi43 = 0;
      for (std::size_t t = 0; t < xi.sites; ++t) {
        double n2 = 0;
        for (int e = 0; e < xi.r * xi.r; ++e) n2 += std::norm(xi.at(t)[e]);
        xi43 += std::pow(std::sqrt(n2), 4.0 / 3.0) * vol_d_cell;
      }
      xi43 = std::pow(xi43, 3.0 / 4.0);
      if (xi43 > 1.0) {
        double ns = n_slice(g, tw, h0, h_t, si, ai, 17);
        c_z = std::min(c_z, ns / (xi43 - 1.0));
        // lambda-bar route of the end-of-proof chain
        ScalarField lbs(cs.nsites());
        for (std::size_t t = 0; t < lbs.sites; ++t)
          lbs.v[t] = lb.v[g.slice_start(si, ai) + t];
        double lb43 = 0;
        for (double v : lbs.v) lb43 += std::pow(v, 4.0 / 3.0) * vol_d_cell;
        lb43 = std::pow(lb43, 3.0 / 4.0);
        if (lb43 > 1.0 && rep.L > 0)
          k_prime_stab = std::min(k_prime_stab,
                                  rep.L * std::sqrt(fhat_l2sq) / (lb43 - 1.0));
      }
    }
  // the (s,alpha) integral weight is hs*halpha per sampled pair
  rep.slab_energy = slab_energy * g.hs * g.halpha;

  rep.c_z = c_z == 1e300 ? 0.0 : c_z;
  rep.k_prime = k_prime_stab == 1e300 ? 0.0 : k_prime_stab;
  rep.k_p43 = std::pow(vol_d, 1.0 / (4.0 / 3.0) - 1.0);
  rep.k_dblprime = rep.k_prime * rep.k_p43;
  const double moser_kprime = measure_moser_kprime(g, lb, prof, beta, 0.5, 1.0);
  rep.k_half_one = 3.14159265358979323846 * moser_kprime * 0.25 * vol_d;
  const double pi = 3.14159265358979323846;
  rep.c = std::pow(rep.k_dblprime * rep.k_half_one / (std::sqrt(2.0) * pi), 2.0);
  rep.c_prime = (rep.k_dblprime * rep.k_half_one) > 0
                    ? rep.k_prime / (rep.k_dblprime * rep.k_half_one)
                    : 0.0;
  rep.c_dblprime = beta > 0 ? 2.0 * pi / std::sqrt(beta) : 0.0;
  const double fac = 1.0 - (rep.L > 0 ? rep.c_prime / rep.L : 0.0);
  rep.rhs = 0.5 * rep.c * rep.mu_A * fac * fac;
  rep.ratio = rep.rhs > 0 ? rep.slab_energy / rep.rhs : 0.0;
  return rep;
}

WeakMaxReport weak_max_principle_check(const LatticeChart& g, uint64_t seed, int box, int iters) {
  WeakMaxReport rep;
  Prng rng(seed);
  // sub-box around a random interior anchor
  std::vector<int> lo(g.naxes()), hilim(g.naxes());
  for (int k = 0; k < g.naxes(); ++k) {
    const auto ax = g.axis(k);
    int len = std::min(box, ax.length - 2);
    if (len < 3) len = 3;
    int maxlo = ax.length - len - 1;
    lo[k] = maxlo > 0 ? static_cast<int>(rng.uniform_int(0, maxlo)) : 0;
    hilim[k] = lo[k] + len;
  }
  auto inside = [&](const std::vector<int>& c, bool strict) {
    for (int k = 0; k < g.naxes(); ++k) {
      if (strict) {
        if (c[k] <= lo[k] || c[k] >= hilim[k]) return false;
      } else {
        if (c[k] < lo[k] || c[k] > hilim[k]) return false;
      }
    }
    return true;
  };
  ScalarField f(g.nsites());
  std::vector<char> interior(g.nsites(), 0), boundary(g.nsites(), 0);
  for (std::size_t s = 0; s < g.nsites(); ++s) {
    auto c = site_coords(g, s);
    if (!inside(c, false)) continue;
    if (inside(c, true))
      interior[s] = 1;
    else {
      boundary[s] = 1;
      f.v[s] = rng.uniform(-1.0, 1.0);
    }
  }
  // Jacobi relaxation of the graph Laplacian on the interior
  for (int it = 0; it < iters; ++it) {
    ScalarField lap = graph_laplacian(g, f);
    double res = 0;
    // diagonal of the graph Laplacian: sum over axes of 2/h^2 (interior nodes)
    double diag = 0;
    for (int k = 0; k < g.naxes(); ++k) {
      const auto ax = g.axis(k);
      diag += 2.0 / (ax.h * ax.h);
    }
    for (std::size_t s = 0; s < g.nsites(); ++s) {
      if (!interior[s]) continue;
      f.v[s] -= lap.v[s] / diag;
      res = std::max(res, std::abs(lap.v[s]));
    }
    if (res < 1e-13) break;
    if (it == iters - 1) rep.relax_residual = res;
  }
  ScalarField lap = graph_laplacian(g, f);
  for (std::size_t s = 0; s < g.nsites(); ++s)
    if (interior[s]) rep.relax_residual = std::max(rep.relax_residual, std::abs(lap.v[s]));
  rep.interior_max = -1e300;
  rep.boundary_max = -1e300;
  for (std::size_t s = 0; s < g.nsites(); ++s) {
    if (interior[s]) rep.interior_max = std::max(rep.interior_max, f.v[s]);
    if (boundary[s]) rep.boundary_max = std::max(rep.boundary_max, f.v[s]);
  }
  rep.pass = rep.interior_max <= rep.boundary_max + 1e-10;
  return rep;
}

}  // namespace g2flow
