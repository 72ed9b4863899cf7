#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "g2flow/donaldson.hpp"
#include "g2flow/prng.hpp"
#include "g2flow/smallmat.hpp"

using namespace g2flow;

namespace {

LatticeChart torus_chart(int n) {
  LatticeChart g;
  g.m = 1;
  g.nD = n;
  g.hD = 2.0 * M_PI / n;
  g.Ns = 0;
  g.validate();
  return g;
}

LatticeChart cyl_chart(int nD, int Ns, int Na, double hs = 0.3) {
  LatticeChart g;
  g.m = 1;
  g.nD = nD;
  g.hD = 2.0 * M_PI / nD;
  g.Ns = Ns;
  g.Nalpha = Na;
  g.hs = hs;
  g.halpha = 2.0 * M_PI / Na;
  g.validate();
  return g;
}

EndoField random_metric(const LatticeChart& g, Prng& rng, int r, double amp) {
  EndoField h(g.nsites(), r);
  std::vector<cdouble> m1(r * r), m2(r * r);
  rng.hermitian(m1.data(), r, amp);
  rng.hermitian(m2.data(), r, amp);
  for (std::size_t s = 0; s < g.nsites(); ++s) {
    double x = (s % g.nD) * g.hD, y = ((s / g.nD) % g.nD) * g.hD;
    std::vector<cdouble> chi(r * r);
    for (int t = 0; t < r * r; ++t)
      chi[t] = std::cos(x) * m1[t] + std::sin(x + 2 * y) * m2[t];
    mat_exp_hermitian(h.at(s), chi.data(), r);
  }
  return h;
}

}  // namespace

TEST_CASE("theta evaluation: zero cases and the abelian formula") {
  LatticeChart g = torus_chart(6);
  HolomorphicTwist tw = HolomorphicTwist::exact(g, 1, 2, 0.2);
  Prng rng(8);
  EndoField h = random_metric(g, rng, 1, 0.3);
  CurvatureField f = curvature(g, h, tw);

  EndoField kzero(g.nsites(), 1);
  CurvatureField th0 = theta_eval(g, h, kzero, f);
  for (auto& z : th0.v) CHECK(std::abs(z) == 0.0);

  CurvatureField fzero(g.nsites(), 1, 1);
  EndoField k(g.nsites(), 1);
  for (auto& z : k.v) z = rng.cgaussian();
  CurvatureField th1 = theta_eval(g, h, k, fzero);
  for (auto& z : th1.v) CHECK(std::abs(z) == 0.0);

  // r=1: theta = 2i (k/H) F componentwise
  CurvatureField th = theta_eval(g, h, k, f);
  for (std::size_t s = 0; s < g.nsites(); ++s)
    for (int a = 0; a < f.n; ++a)
      for (int b = 0; b < f.n; ++b) {
        cdouble want = cdouble(0, 2) * (k.v[s] / h.v[s]) * (*f.at(s, a, b));
        CHECK(std::abs(*th.at(s, a, b) - want) < 1e-13 * (1.0 + std::abs(want)));
      }
}

TEST_CASE("functional along the constant path vanishes; reversal negates") {
  LatticeChart g = torus_chart(6);
  HolomorphicTwist tw = HolomorphicTwist::exact(g, 2, 12, 0.2);
  Prng rng(4);
  EndoField h0 = random_metric(g, rng, 2, 0.2);

  QuadratureResult at_h0 = n_functional_geodesic(g, tw, h0, h0, 5);
  CHECK(std::abs(at_h0.value) < 1e-14);

  EndoField h = random_metric(g, rng, 2, 0.25);
  QuadratureResult fwd = n_functional_geodesic(g, tw, h0, h, 17);
  QuadratureResult rev = n_functional_geodesic(g, tw, h, h0, 17);
  CHECK(fwd.value == doctest::Approx(-rev.value).epsilon(1e-11));
}

TEST_CASE("path independence of the functional for nearby metrics") {
  // rho is closed only up to a discrete defect O(h^2 ||xi||^3); with nearby
  // metrics on a fine chart the two-leg evaluation agrees to 1e-6 absolute
  LatticeChart g = torus_chart(24);
  HolomorphicTwist tw = HolomorphicTwist::exact(g, 2, 9, 0.2);
  Prng rng(6);
  EndoField h0 = EndoField::identity(g.nsites(), 2);
  for (int trial = 0; trial < 10; ++trial) {
    EndoField h = random_metric(g, rng, 2, 0.008);
    EndoField hmid = random_metric(g, rng, 2, 0.006);
    PathIndependence pi = path_independence_check(g, tw, h0, h, hmid, 33);
    CHECK(pi.discrepancy <= 1e-6);
  }
}

TEST_CASE("quadrature error decreases at order >= 2 under sample doubling") {
  LatticeChart g = torus_chart(8);
  HolomorphicTwist tw = HolomorphicTwist::exact(g, 2, 9, 0.2);
  Prng rng(16);
  EndoField h0 = EndoField::identity(g.nsites(), 2);
  EndoField h = random_metric(g, rng, 2, 0.4);
  EndoField xi = log_relative(h, h0);
  // fixed-sample values against a fine reference
  auto nval = [&](int samples) {
    QuadratureResult q = n_functional_geodesic(g, tw, h0, h, samples, 0.0, 0);
    return q.value;
  };
  const double ref = nval(257);
  const double e5 = std::abs(nval(5) - ref);
  const double e9 = std::abs(nval(9) - ref);
  const double e17 = std::abs(nval(17) - ref);
  CHECK(e5 / e9 >= 4.0);   // order >= 2 (Simpson is order 4)
  CHECK(e9 / e17 >= 4.0);
  (void)xi;
}

TEST_CASE("quadrature refinement reports convergence") {
  LatticeChart g = torus_chart(5);
  HolomorphicTwist tw = HolomorphicTwist::exact(g, 2, 13, 0.2);
  Prng rng(7);
  EndoField h0 = EndoField::identity(g.nsites(), 2);
  EndoField h = random_metric(g, rng, 2, 0.2);
  QuadratureResult q = n_functional_geodesic(g, tw, h0, h, 17, 1e-6, 4);
  CHECK(q.converged);
  CHECK(q.est_error <= 1e-6 * (1.0 + std::abs(q.value)));
}

TEST_CASE("flow identity: dN/dt = -c_n ||F_hat||^2 with the derived constant") {
  // the constant is first re-derived numerically from one fine-lattice step,
  // then the identity is checked along a full run
  LatticeChart g = torus_chart(24);
  HolomorphicTwist tw = HolomorphicTwist::exact(g, 1, 31, 0.15);
  EndoField h0 = EndoField::identity(g.nsites(), 1);
  FlowConfig cfg;
  cfg.safety = 0.02;
  cfg.keep_snapshots = false;
  cfg.track_energy = false;
  cfg.monitor_every = 1 << 30;
  cfg.target_sup_e = 0.0;
  const double dt = cfg.safety * g.hD * g.hD;
  FlowState st = make_flow_state(g, tw, h0);
  const double fhat2_0 = l2_of_scalar(g, st.ehat);
  flow_step(st, dt, cfg);
  st.refresh();
  const double fhat2_1 = l2_of_scalar(g, st.ehat);
  QuadratureResult n1 = n_functional_geodesic(g, tw, h0, st.H, 9);
  const double measured_cn = -n1.value / (0.5 * dt * (fhat2_0 + fhat2_1));
  CHECK(measured_cn == doctest::Approx(donaldson_cn(g.ncomplex())).epsilon(2e-3));
  CHECK(donaldson_cn(1) == 4.0);
  CHECK(donaldson_cn(2) == 4.0);
  CHECK(donaldson_cn(3) == 8.0);
}

TEST_CASE("flow identity along a run, rank 2") {
  LatticeChart g = torus_chart(8);
  HolomorphicTwist tw = HolomorphicTwist::exact(g, 2, 5, 0.2);
  EndoField h0 = EndoField::identity(g.nsites(), 2);
  FlowConfig cfg;
  cfg.safety = 0.05;
  cfg.t_end = 0.4;
  cfg.monitor_every = 3;
  FlowTrace tr = flow_run(g, tw, h0, cfg);
  REQUIRE(tr.snapshots.size() >= 4);
  const double cn = donaldson_cn(g.ncomplex());

  std::vector<double> nvals, fh2;
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
    QuadratureResult q = n_functional_geodesic(g, tw, h0, tr.snapshots[i], 17);
    nvals.push_back(q.value);
    CurvatureField f = curvature(g, tr.snapshots[i], tw);
    fh2.push_back(l2_of_scalar(g, e_hat_field(lambda_contract(f))));
  }
  for (std::size_t i = 1; i + 1 < nvals.size(); ++i) {
    double dndt = (nvals[i + 1] - nvals[i - 1]) /
                  (tr.snapshot_times[i + 1] - tr.snapshot_times[i - 1]);
    double err = std::abs(dndt + cn * fh2[i]);
    CHECK(err <= std::max(1e-2 * cn * fh2[i], 20.0 * tr.dt));
    CHECK(nvals[i] <= nvals[i - 1] + 1e-10);  // N non-increasing
  }
  // and the functional agrees with the flow-path integral it recorded
  for (std::size_t i = 1; i < tr.samples.size(); ++i) {
    double d = std::abs(tr.samples[i].n_flow - nvals[i]);
    CHECK(d <= 2e-2 * (1.0 + std::abs(nvals[i])));
  }
}

TEST_CASE("slice convexity: zero path, the r=1 oracle, positivity") {
  LatticeChart g = cyl_chart(6, 6, 3);
  HolomorphicTwist tw = HolomorphicTwist::gauge(g, 1, 21, 0.25);
  EndoField h0 = make_reference_metric(g, tw, 1, 1e-20);

  // constant path
  ConvexitySamples flat = m_convexity(g, tw, h0, h0, 2, 1, 9);
  CHECK(std::abs(flat.n_slice) < 1e-12);
  for (double v : flat.m1) CHECK(std::abs(v) < 1e-12);

  // a nearby metric: m'' >= 0 exactly, N_slice >= -1e-10, m'(0) ~ 0
  Prng rng(3);
  EndoField h = h0;
  for (std::size_t s = 0; s < g.nsites(); ++s) {
    double x = (s % g.nD) * g.hD;
    h.v[s] *= std::exp(0.2 * std::cos(x));
  }
  ConvexitySamples cs = m_convexity(g, tw, h0, h, 2, 1, 17);
  for (double v : cs.m2) CHECK(v >= -1e-10);
  CHECK(cs.n_slice >= -1e-10);
  CHECK(std::abs(cs.m1.front()) < 1e-9);  // slice-HYM reference
  CHECK(cs.m.back() == doctest::Approx(cs.n_slice).epsilon(1e-3));

  // r = 1 oracle: m'' equals the forward-difference Dirichlet energy of xi
  LatticeChart slice = g.cross_section();
  EndoField h0s = slice_endo(g, h0, 2, 1);
  EndoField hs = slice_endo(g, h, 2, 1);
  EndoField xi = log_relative(hs, h0s);
  double grad2 = 0;
  for (int axis = 0; axis < 2; ++axis) {
    EndoField d = deriv_axis(slice, xi, axis, Stencil::forward);
    for (auto& z : d.v) grad2 += std::norm(z);
  }
  grad2 *= slice.cell_volume();
  for (double v : cs.m2) CHECK(v == doctest::Approx(grad2).epsilon(1e-9));

  // finite-difference consistency of m'' with m'
  const double dl = cs.ell[1] - cs.ell[0];
  for (std::size_t i = 1; i + 1 < cs.m1.size(); ++i) {
    double fd = (cs.m1[i + 1] - cs.m1[i - 1]) / (2 * dl);
    CHECK(fd == doctest::Approx(cs.m2[i]).epsilon(5e-2));
  }
  (void)rng;
}

TEST_CASE("slice functional on rank-2 flow states: bound and near-positivity") {
  LatticeChart g = cyl_chart(6, 6, 3);
  HolomorphicTwist tw = HolomorphicTwist::gauge(g, 2, 13, 0.25);
  const double slice_tol = 1e-18;
  EndoField h0 = make_reference_metric(g, tw, 2, slice_tol);
  FlowConfig cfg;
  cfg.safety = 0.05;
  cfg.t_end = 0.3;
  cfg.monitor_every = 40;
  FlowTrace tr = flow_run(g, tw, h0, cfg);
  REQUIRE_FALSE(tr.diverged);

  LatticeChart slice = g.cross_section();
  double vol_d = slice.cell_volume() * static_cast<double>(slice.nsites());
  const double c1 = 2.0 * std::sqrt(vol_d);
  for (std::size_t i = 1; i < tr.snapshots.size(); ++i) {
    ScalarField lb = lambda_bar_field(tr.snapshots[i], h0);
    const double L = sup_scalar(lb);
    for (int si : {1, 3}) {
      for (int ai : {0, 2}) {
        ConvexitySamples cs = m_convexity(g, tw, h0, tr.snapshots[i], si, ai, 17);
        for (double v : cs.m2) CHECK(v >= -1e-10);
        // slice-HYM only holds to slice_tol; the functional inherits an
        // allowance ~ 2 sqrt(sup e0_slice) ||xi||_1
        EndoField h0s = slice_endo(g, h0, si, ai);
        EndoField hs = slice_endo(g, tr.snapshots[i], si, ai);
        EndoField xi = log_relative(hs, h0s);
        double xi_l1 = 0;
        for (std::size_t s = 0; s < xi.sites; ++s)
          xi_l1 += std::sqrt(mat_frob2(xi.at(s), xi.r)) * slice.cell_volume();
        const double allowance = 4.0 * std::sqrt(slice_tol) * xi_l1 + 1e-10;
        CHECK(cs.n_slice >= -allowance);

        // upper bound through the restricted curvature
        HolomorphicTwist stw = slice_twist(g, tw, si, ai);
        CurvatureField f = curvature(slice, hs, stw);
        ScalarField eh = e_hat_field(lambda_contract(f));
        const double fhat_l2 = std::sqrt(l2_of_scalar(slice, eh));
        CHECK(cs.n_slice <= c1 * std::max(L, 1e-30) * fhat_l2 + 1e-10);
      }
    }
  }
}
