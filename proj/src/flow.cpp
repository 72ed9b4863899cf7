#include "g2flow/flow.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "g2flow/parallel.hpp"
#include "g2flow/smallmat.hpp"

namespace g2flow {

void FlowState::refresh() {
  if (cache_valid) return;
  F = curvature(*geom, H, *twist);
  Fhat = lambda_contract(F);
  ehat = e_hat_field(Fhat);
  cache_valid = true;
}

FlowState make_flow_state(const LatticeChart& g, const HolomorphicTwist& tw, const EndoField& h0) {
  FlowState st;
  st.geom = &g;
  st.twist = &tw;
  st.H = h0;
  st.H0 = h0;
  st.t = 0;
  st.refresh();
  return st;
}

namespace {

void pin_dirichlet(const LatticeChart& g, EndoField& h, const EndoField& h0) {
  if (g.Ns == 0) return;
  const std::size_t slab = g.torus_sites() * static_cast<std::size_t>(g.Nalpha);
  const std::size_t blk = h.block();
  // s = 0 slab
  std::memcpy(h.v.data(), h0.v.data(), slab * blk * sizeof(cdouble));
  // s = S slab
  const std::size_t off = (static_cast<std::size_t>(g.Ns) - 1) * slab * blk;
  std::memcpy(h.v.data() + off, h0.v.data() + off, slab * blk * sizeof(cdouble));
}

}  // namespace

void flow_step(FlowState& st, double dt, const FlowConfig& cfg) {
  const LatticeChart& g = *st.geom;
  const double hmin = g.min_spacing();
  const double dt_max = cfg.safety * hmin * hmin;
  if (dt > dt_max * (1.0 + 1e-12)) {
    throw std::invalid_argument("flow_step: CFL violation, dt " + std::to_string(dt) +
                                " exceeds safety*h^2 = " + std::to_string(dt_max) +
                                "; use dt <= " + std::to_string(dt_max));
  }
  st.refresh();
  const int r = st.H.r;
  std::size_t bad = st.H.sites;
  for (std::size_t s = 0; s < st.H.sites && bad == st.H.sites; ++s) {
    const cdouble* m = st.Fhat.at(s);
    for (int t = 0; t < r * r; ++t)
      if (!std::isfinite(m[t].real()) || !std::isfinite(m[t].imag())) bad = s;
  }
  if (bad != st.H.sites)
    throw std::runtime_error("flow_step: non-finite curvature at " + g.describe(bad));

  parallel_for(st.H.sites, [&](std::size_t s) {
    std::vector<cdouble> x(r * r), p(r * r), hn(r * r);
    const cdouble* fh = st.Fhat.at(s);
    const cdouble c(0.0, -2.0 * dt);
    for (int t = 0; t < r * r; ++t) x[t] = c * fh[t];
    if (cfg.det1 && r > 1) {  // for rank 1 the traceless projection is void
      cdouble tr = mat_trace(x.data(), r) / static_cast<double>(r);
      for (int i = 0; i < r; ++i) x[i * r + i] -= tr;
    }
    mat_exp(p.data(), x.data(), r);
    mat_mul(hn.data(), st.H.at(s), p.data(), r);
    // re-hermitize against roundoff
    cdouble* out = st.H.at(s);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) out[i * r + j] = 0.5 * (hn[i * r + j] + std::conj(hn[j * r + i]));
  });
  pin_dirichlet(g, st.H, st.H0);
  st.t += dt;
  st.cache_valid = false;
}

namespace {

FlowSample make_sample(const LatticeChart& g, FlowState& st, double n_flow, double f0_l2sq,
                       double charge0, const FlowConfig& cfg) {
  FlowSample smp;
  st.refresh();
  smp.t = st.t;
  smp.sup_e = sup_scalar(st.ehat);
  smp.sup_sigma = sup_sigma(g, st.H, st.H0);
  ScalarField lb = lambda_bar_field(st.H, st.H0);
  smp.l_t = sup_scalar(lb);
  smp.fhat_l2sq = l2_of_scalar(g, st.ehat);
  smp.n_flow = n_flow;
  if (cfg.track_energy) {
    EndoField hinv = field_inverse(g, st.H);
    ScalarField fn = curvature_norm2_field(g, st.F, st.H, hinv);
    smp.energy_raw = l2_of_scalar(g, fn) - f0_l2sq;
    smp.charge = discrete_charge(g, st.F, st.H);
    // the continuum flow conserves the charge under Dirichlet data; the
    // discrete drift is pure discretization error and is subtracted so the
    // upper energy bound is a meaningful check at any resolution
    smp.energy = smp.energy_raw - (smp.charge - charge0);
  }
  if (g.Ns > 0) {
    smp.ell_lambda.assign(g.Ns, 0.0);
    smp.ell_e.assign(g.Ns, 0.0);
    const std::size_t slab = g.torus_sites() * static_cast<std::size_t>(g.Nalpha);
    for (std::size_t s = 0; s < st.ehat.sites; ++s) {
      int si = static_cast<int>(s / slab);
      smp.ell_lambda[si] = std::max(smp.ell_lambda[si], lb.v[s]);
      smp.ell_e[si] = std::max(smp.ell_e[si], st.ehat.v[s]);
    }
  }
  return smp;
}

}  // namespace

FlowTrace flow_run(const LatticeChart& g, const HolomorphicTwist& tw, const EndoField& h0,
                   const FlowConfig& cfg) {
  if (cfg.safety <= 0.0 || cfg.safety > 1.0)
    throw std::invalid_argument("flow_run: safety must lie in (0, 1]");
  FlowState st = make_flow_state(g, tw, h0);
  FlowTrace tr;
  const double hmin = g.min_spacing();
  double dt = cfg.dt > 0 ? cfg.dt : cfg.safety * hmin * hmin;
  tr.dt = dt;
  const int n = g.ncomplex();
  double cn = 4.0;
  for (int k = 2; k < n; ++k) cn *= k;  // 4 (n-1)!

  EndoField h0inv = field_inverse(g, h0);
  const double f0_l2sq =
      cfg.track_energy ? l2_of_scalar(g, curvature_norm2_field(g, st.F, h0, h0inv)) : 0.0;
  const double charge0 = cfg.track_energy ? discrete_charge(g, st.F, h0) : 0.0;
  const double sup_e0 = sup_scalar(st.ehat);

  double n_flow = 0;
  double prev_rho = -cn * l2_of_scalar(g, st.ehat);

  auto record = [&]() {
    tr.samples.push_back(make_sample(g, st, n_flow, f0_l2sq, charge0, cfg));
    if (cfg.keep_snapshots) {
      tr.snapshots.push_back(st.H);
      tr.snapshot_times.push_back(st.t);
    }
  };
  record();
  if (sup_e0 < cfg.target_sup_e) {
    tr.converged = true;
    return tr;
  }

  const int max_steps = static_cast<int>(std::ceil(cfg.t_end / dt - 1e-12));
  for (int step = 1; step <= max_steps; ++step) {
    flow_step(st, dt, cfg);
    st.refresh();
    const double rho = -cn * l2_of_scalar(g, st.ehat);
    n_flow += 0.5 * dt * (prev_rho + rho);
    prev_rho = rho;
    tr.steps = step;

    const double se = sup_scalar(st.ehat);
    if (se > cfg.divergence_factor * (sup_e0 + 1e-30)) {
      tr.diverged = true;
      tr.abort_reason = "sup |F_hat|^2 grew " + std::to_string(se / (sup_e0 + 1e-30)) +
                        "x over its initial value (CFL/modeling failure)";
      record();
      return tr;
    }
    if (step % cfg.monitor_every == 0 || step == max_steps) record();
    if (se < cfg.target_sup_e) {
      tr.converged = true;
      if (step % cfg.monitor_every != 0 && step != max_steps) record();
      return tr;
    }
  }
  return tr;
}

ScalarField sigma_field(const LatticeChart& g, const EndoField& h, const EndoField& k) {
  if (h.r != k.r || h.sites != k.sites)
    throw std::invalid_argument("sigma_field: rank or size mismatch");
  EndoField hinv = field_inverse(g, h);
  EndoField kinv = field_inverse(g, k);
  const int r = h.r;
  ScalarField out(h.sites);
  parallel_for(h.sites, [&](std::size_t s) {
    const cdouble *hi = hinv.at(s), *kk = k.at(s), *ki = kinv.at(s), *hh = h.at(s);
    cdouble tr1(0), tr2(0);
    for (int i = 0; i < r; ++i)
      for (int z = 0; z < r; ++z) {
        tr1 += hi[i * r + z] * kk[z * r + i];
        tr2 += ki[i * r + z] * hh[z * r + i];
      }
    double v = tr1.real() + tr2.real() - 2.0 * r;
    out.v[s] = v > 0 ? v : 0.0;
  });
  return out;
}

double sup_sigma(const LatticeChart& g, const EndoField& h, const EndoField& k) {
  return sup_scalar(sigma_field(g, h, k));
}

ScalarField lambda_bar_field(const EndoField& h, const EndoField& h0) {
  const int r = h.r;
  ScalarField out(h.sites);
  parallel_for(h.sites, [&](std::size_t s) {
    std::vector<cdouble> w(r * r), t1(r * r), sym(r * r);
    std::vector<double> ev(r);
    mat_invsqrt_posdef(w.data(), h0.at(s), r);
    mat_mul(t1.data(), w.data(), h.at(s), r);
    mat_mul(sym.data(), t1.data(), w.data(), r);  // H0^{-1/2} H H0^{-1/2}
    hermitian_eig(sym.data(), r, ev.data(), nullptr);
    double top = std::log(ev[r - 1]);
    out.v[s] = top > 0 ? top : 0.0;  // codomain R_{>=0}
  });
  return out;
}

EndoField log_relative(const EndoField& h, const EndoField& h0) {
  const int r = h.r;
  EndoField out(h.sites, r);
  parallel_for(h.sites, [&](std::size_t s) {
    std::vector<cdouble> w(r * r), wp(r * r), t1(r * r), sym(r * r), lg(r * r);
    mat_invsqrt_posdef(w.data(), h0.at(s), r);
    mat_sqrt_posdef(wp.data(), h0.at(s), r);
    mat_mul(t1.data(), w.data(), h.at(s), r);
    mat_mul(sym.data(), t1.data(), w.data(), r);
    mat_log_posdef(lg.data(), sym.data(), r);
    // xi = H0^{-1/2} log(S) H0^{1/2}
    mat_mul(t1.data(), w.data(), lg.data(), r);
    mat_mul(out.at(s), t1.data(), wp.data(), r);
  });
  return out;
}

MonitorReport monitor_max_principles(const LatticeChart& g, const FlowTrace& trace,
                                     const EndoField& h0, double mono_c, bool det1) {
  MonitorReport rep;
  const double tol = 1e-8 + mono_c * trace.dt;

  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    double inc = trace.samples[i].sup_e - trace.samples[i - 1].sup_e;
    rep.worst_e_increase = std::max(rep.worst_e_increase, inc);
    if (inc > tol * (1.0 + trace.samples[0].sup_e)) {
      rep.sup_e_monotone = false;
      rep.violations.push_back("sup |F_hat|^2 increased by " + std::to_string(inc) +
                               " at t=" + std::to_string(trace.samples[i].t) +
                               " (max-principle monotonicity monitor)");
    }
  }

  // sup sigma(H_t, H_{t+tau}) non-increasing for the snapshot lag tau
  if (trace.snapshots.size() >= 3) {
    double prev = -1;
    for (std::size_t i = 0; i + 1 < trace.snapshots.size(); ++i) {
      double d = sup_sigma(g, trace.snapshots[i], trace.snapshots[i + 1]);
      if (prev >= 0) {
        double inc = d - prev;
        rep.worst_sigma_increase = std::max(rep.worst_sigma_increase, inc);
        if (inc > tol * (1.0 + d)) {
          rep.sigma_monotone = false;
          rep.violations.push_back("sup sigma(H_t, H_{t+tau}) increased by " +
                                   std::to_string(inc) + " at sample " + std::to_string(i) +
                                   " (sigma max-principle monitor)");
        }
      }
      prev = d;
    }
  }

  for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
    const EndoField& h = trace.snapshots[i];
    if (max_hermiticity_defect(h) > 1e-12) {
      rep.hermiticity_ok = false;
      rep.violations.push_back("metric hermiticity defect above 1e-12 at sample " +
                               std::to_string(i));
    }
    if (min_eigenvalue(h) <= 0) {
      rep.positivity_ok = false;
      rep.violations.push_back("metric lost positivity at sample " + std::to_string(i));
    }
    if (det1 && max_det_defect(h) > 1e-10) {
      rep.det1_ok = false;
      rep.violations.push_back("det H drifted from 1 at sample " + std::to_string(i));
    }
    if (g.Ns > 0) {
      const std::size_t slab = g.torus_sites() * static_cast<std::size_t>(g.Nalpha);
      const std::size_t blk = h.block();
      bool same = std::memcmp(h.v.data(), h0.v.data(), slab * blk * sizeof(cdouble)) == 0;
      const std::size_t off = (static_cast<std::size_t>(g.Ns) - 1) * slab * blk;
      same = same && std::memcmp(h.v.data() + off, h0.v.data() + off,
                                 slab * blk * sizeof(cdouble)) == 0;
      if (!same) {
        rep.dirichlet_ok = false;
        rep.violations.push_back("Dirichlet slices differ from H0 at sample " + std::to_string(i));
      }
    }
  }
  return rep;
}

DecayProfile decay_profile(const LatticeChart& g, const ScalarField& ehat_t, double t, double B) {
  DecayProfile out;
  out.bound_b = B;
  if (g.Ns == 0) {
    out.degenerate = true;
    return out;
  }
  const std::size_t slab = g.torus_sites() * static_cast<std::size_t>(g.Nalpha);
  std::vector<double> prof(g.Ns, 0.0);
  for (std::size_t s = 0; s < ehat_t.sites; ++s) {
    int si = static_cast<int>(s / slab);
    prof[si] = std::max(prof[si], ehat_t.v[s]);
  }
  // least squares on the interior of the tube
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int npt = 0;
  for (int si = 1; si + 1 < g.Ns; ++si) {
    if (prof[si] <= 0) continue;
    double x = si * g.hs, y = std::log(prof[si]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++npt;
  }
  if (npt < 2) {
    out.degenerate = true;
    return out;
  }
  const double det = npt * sxx - sx * sx;
  out.slope = (npt * sxy - sx * sy) / det;
  out.intercept = (sy * sxx - sx * sxy) / det;
  // pointwise comparison on interior sites
  for (std::size_t s = 0; s < ehat_t.sites; ++s) {
    int si = static_cast<int>(s / slab);
    if (si == 0 || si == g.Ns - 1) continue;
    double bound = B * std::exp(t - si * g.hs);
    if (ehat_t.v[s] > bound * (1.0 + 1e-9) + 1e-300) ++out.pointwise_violations;
  }
  return out;
}

LaplacianBoundReport laplacian_bound_check(const LatticeChart& g, const EndoField& h,
                                           const EndoField& k, const HolomorphicTwist& tw,
                                           double frozen_constant) {
  LaplacianBoundReport rep;
  rep.frozen_constant = frozen_constant;
  const int r = h.r;
  EndoField kinv = field_inverse(g, k);
  // h_rel = K^{-1} H ; Delta_K H = K Delta_K h_rel
  EndoField hrel(h.sites, r);
  field_mat_mul(hrel, kinv, h);
  EndoField lap = kahler_laplacian(g, hrel, tw, k);
  CurvatureField f = curvature(g, h, tw);
  EndoField fhat = lambda_contract(f);
  EndoField hinv = field_inverse(g, h);

  // gradient term: per-site sum_j ||K psi_j||^2 with psi the covariant
  // derivatives of h_rel in the K-connection
  ScalarField grad2 = covariant_grad_norm2(g, hrel, tw, k, kinv);

  double worst = 0;
  for (std::size_t s = 0; s < h.sites; ++s) {
    std::vector<cdouble> t1(r * r);
    mat_mul(t1.data(), k.at(s), lap.at(s), r);
    const double lhs = std::sqrt(mat_frob2(t1.data(), r));
    const double nk2 = mat_frob2(k.at(s), r);
    const double rhs = (std::sqrt(mat_frob2(fhat.at(s), r)) + 1.0) * std::sqrt(mat_frob2(h.at(s), r)) +
                       nk2 * grad2.v[s] * std::sqrt(mat_frob2(hinv.at(s), r));
    if (rhs > 0) worst = std::max(worst, lhs / rhs);
  }
  rep.max_ratio = worst;
  rep.ok = worst <= frozen_constant;
  return rep;
}

}  // namespace g2flow
