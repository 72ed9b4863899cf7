#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "g2flow/flow.hpp"
#include "g2flow/smallmat.hpp"

namespace g2flow {

HolomorphicTwist slice_twist(const LatticeChart& g, const HolomorphicTwist& tw, int si, int ai) {
  LatticeChart cs = g.cross_section();
  HolomorphicTwist out;
  out.decay = tw.decay;
  out.zero = tw.zero;
  out.a = OneFormField(cs.nsites(), cs.ncomplex(), tw.a.r);
  if (tw.zero) return out;
  const std::size_t ts = g.torus_sites();
  const std::size_t start = g.slice_start(si, ai);
  const std::size_t blk = static_cast<std::size_t>(tw.a.r) * tw.a.r;
  for (std::size_t t = 0; t < ts; ++t)
    for (int j = 0; j < cs.ncomplex(); ++j)
      std::memcpy(out.a.at(t, j), tw.a.at(start + t, j), blk * sizeof(cdouble));
  // a slice twist with no components is zero even if the parent was not
  double nrm = 0;
  for (const auto& z : out.a.v) nrm += std::norm(z);
  out.zero = nrm == 0.0;
  return out;
}

namespace {

// flat-Hermitian residual representative: Q = H^{1/2} (i F_hat) H^{-1/2}
std::vector<double> hym_residual(const LatticeChart& cs, const HolomorphicTwist& tw,
                                 const EndoField& h, double* sup_e) {
  const int r = h.r;
  CurvatureField f = curvature(cs, h, tw);
  EndoField fhat = lambda_contract(f);
  if (sup_e) *sup_e = sup_scalar(e_hat_field(fhat));
  std::vector<double> out(h.sites * r * r);
  std::vector<cdouble> w(r * r), wi(r * r), t1(r * r), q(r * r);
  for (std::size_t s = 0; s < h.sites; ++s) {
    mat_sqrt_posdef(w.data(), h.at(s), r);
    mat_invsqrt_posdef(wi.data(), h.at(s), r);
    std::vector<cdouble> g1(r * r);
    for (int t = 0; t < r * r; ++t) g1[t] = cdouble(0, 1) * fhat.at(s)[t];
    mat_mul(t1.data(), w.data(), g1.data(), r);
    mat_mul(q.data(), t1.data(), wi.data(), r);
    // Hermitian components: diagonal (r reals) then off-diagonal re/im
    double* o = out.data() + s * r * r;
    int idx = 0;
    for (int i = 0; i < r; ++i) o[idx++] = q[i * r + i].real();
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j) {
        o[idx++] = q[i * r + j].real();
        o[idx++] = q[i * r + j].imag();
      }
  }
  return out;
}

void add_hermitian_basis(EndoField& h, std::size_t site, int k, double eps) {
  const int r = h.r;
  cdouble* m = h.at(site);
  if (k < r) {
    m[k * r + k] += eps;
    return;
  }
  int idx = r;
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      if (k == idx) {
        m[i * r + j] += eps;
        m[j * r + i] += eps;
        return;
      }
      ++idx;
      if (k == idx) {
        m[i * r + j] += cdouble(0, eps);
        m[j * r + i] += cdouble(0, -eps);
        return;
      }
      ++idx;
    }
}

// Newton refinement with a finite-difference Jacobian and a ridge-regularized
// normal-equation solve; the near-flat automorphism directions of decomposable
// slice bundles make the plain flow arbitrarily slow, while Newton lands on
// the residual floor in a few iterations.
bool newton_refine(const LatticeChart& cs, const HolomorphicTwist& tw, EndoField& h, double tol,
                   int max_iter) {
  const int r = h.r;
  const std::size_t n = h.sites * r * r;
  if (n > 4096) return false;
  const double eps = 1e-7;
  for (int iter = 0; iter < max_iter; ++iter) {
    double sup_e = 0;
    std::vector<double> res = hym_residual(cs, tw, h, &sup_e);
    if (sup_e < tol) return true;
    // J columns by forward differences
    std::vector<double> jac(n * n);
    for (std::size_t k = 0; k < n; ++k) {
      EndoField hp = h;
      add_hermitian_basis(hp, k / (r * r), static_cast<int>(k % (r * r)), eps);
      std::vector<double> rp = hym_residual(cs, tw, hp, nullptr);
      for (std::size_t i = 0; i < n; ++i) jac[i * n + k] = (rp[i] - res[i]) / eps;
    }
    // (J^T J + ridge) x = -J^T r
    std::vector<double> a(n * n, 0.0), b(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        double v = jac[i * n + k];
        if (v == 0.0) continue;
        b[k] -= v * res[i];
        for (std::size_t l = 0; l <= k; ++l) a[k * n + l] += v * jac[i * n + l];
      }
    double scale = 0;
    for (std::size_t k = 0; k < n; ++k) scale = std::max(scale, a[k * n + k]);
    const double ridge = std::max(1e-12 * scale, 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
      a[k * n + k] += ridge;
      for (std::size_t l = k + 1; l < n; ++l) a[k * n + l] = a[l * n + k];
    }
    // Cholesky-free: Gaussian elimination with partial pivoting
    std::vector<std::size_t> piv(n);
    for (std::size_t k = 0; k < n; ++k) piv[k] = k;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t p = c;
      for (std::size_t i = c + 1; i < n; ++i)
        if (std::abs(a[i * n + c]) > std::abs(a[p * n + c])) p = i;
      if (p != c) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[p * n + j]);
        std::swap(b[c], b[p]);
      }
      const double d = a[c * n + c];
      if (std::abs(d) < 1e-300) return false;
      for (std::size_t i = c + 1; i < n; ++i) {
        const double f = a[i * n + c] / d;
        if (f == 0.0) continue;
        for (std::size_t j = c; j < n; ++j) a[i * n + j] -= f * a[c * n + j];
        b[i] -= f * b[c];
      }
    }
    std::vector<double> x(n);
    for (std::size_t c = n; c-- > 0;) {
      double acc = b[c];
      for (std::size_t j = c + 1; j < n; ++j) acc -= a[c * n + j] * x[j];
      x[c] = acc / a[c * n + c];
    }
    // damped update with positivity guard
    double lambda = 1.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      EndoField hn = h;
      for (std::size_t k = 0; k < n; ++k)
        add_hermitian_basis(hn, k / (r * r), static_cast<int>(k % (r * r)), lambda * x[k]);
      if (min_eigenvalue(hn) > 0) {
        double sup_new = 0;
        hym_residual(cs, tw, hn, &sup_new);
        if (sup_new < sup_e) {
          h = hn;
          break;
        }
      }
      lambda *= 0.5;
      if (attempt == 7) return false;
    }
  }
  double sup_e = 0;
  hym_residual(cs, tw, h, &sup_e);
  return sup_e < tol;
}

}  // namespace

EndoField make_reference_metric(const LatticeChart& g, const HolomorphicTwist& tw, int rank,
                                double slice_tol, int max_steps) {
  if (g.Ns == 0) return EndoField::identity(g.nsites(), rank);

  LatticeChart cs = g.cross_section();
  EndoField h0(g.nsites(), rank);
  const std::size_t ts = g.torus_sites();
  const std::size_t blk = static_cast<std::size_t>(rank) * rank;

  // adjacent slices differ by O(h e^{-s}); warm-starting from the previous
  // solution removes most of the transient
  EndoField warm = EndoField::identity(ts, rank);
  for (int si = 0; si < g.Ns; ++si)
    for (int ai = 0; ai < g.Nalpha; ++ai) {
      HolomorphicTwist stw = slice_twist(g, tw, si, ai);
      FlowConfig cfg;
      cfg.safety = 0.1;
      cfg.det1 = false;  // the trace sector relaxes on its own
      cfg.target_sup_e = slice_tol;
      cfg.keep_snapshots = false;
      cfg.track_energy = false;
      cfg.monitor_every = 1 << 30;
      const double dt = cfg.safety * cs.min_spacing() * cs.min_spacing();
      cfg.dt = dt;
      cfg.t_end = max_steps * dt;

      FlowState st = make_flow_state(cs, stw, warm);
      int step = 0;
      const int flow_cap = std::min(max_steps, 600);  // Newton finishes the tail
      while (step < flow_cap) {
        st.refresh();
        if (sup_scalar(st.ehat) < std::max(slice_tol, 1e-6)) break;
        flow_step(st, dt, cfg);
        ++step;
      }
      st.refresh();
      if (sup_scalar(st.ehat) >= slice_tol &&
          !newton_refine(cs, stw, st.H, slice_tol, 12))
        throw std::runtime_error(
            "make_reference_metric: slice did not reach the HYM tolerance (slice s=" +
            std::to_string(si) + ", alpha=" + std::to_string(ai) + ")");
      warm = st.H;
      std::memcpy(h0.v.data() + g.slice_start(si, ai) * blk, st.H.v.data(),
                  ts * blk * sizeof(cdouble));
    }
  return h0;
}

}  // namespace g2flow
