#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "g2flow/io.hpp"
#include "g2flow/ops.hpp"
#include "g2flow/prng.hpp"
#include "g2flow/smallmat.hpp"

using namespace g2flow;

namespace {

LatticeChart torus_chart(int n, int m = 1) {
  LatticeChart g;
  g.m = m;
  g.nD = n;
  g.hD = 2.0 * M_PI / n;
  g.Ns = 0;
  g.validate();
  return g;
}

LatticeChart cyl_chart(int nD, int Ns, int Na) {
  LatticeChart g;
  g.m = 1;
  g.nD = nD;
  g.hD = 2.0 * M_PI / nD;
  g.Ns = Ns;
  g.Nalpha = Na;
  g.hs = 0.25;
  g.halpha = 2.0 * M_PI / Na;
  g.validate();
  return g;
}

// coordinates of a site on the torus chart
void torus_xy(const LatticeChart& g, std::size_t s, double* x, double* y) {
  *x = static_cast<double>(s % g.nD) * g.hD;
  *y = static_cast<double>((s / g.nD) % g.nD) * g.hD;
}

}  // namespace

TEST_CASE("derivatives: constants, plane waves, linear ramps") {
  LatticeChart g = torus_chart(16);
  HolomorphicTwist tw = HolomorphicTwist::none(g, 1);

  EndoField c(g.nsites(), 1);
  for (auto& z : c.v) z = cdouble(2.5, -0.5);
  CHECK(sup_scalar(e_hat_field(deriv_holo(g, c, 0))) == 0.0);

  // e^{ikx}: central-difference symbol is exactly i sin(kh)/h
  const int kmode = 3;
  EndoField f(g.nsites(), 1);
  for (std::size_t s = 0; s < g.nsites(); ++s) {
    double x, y;
    torus_xy(g, s, &x, &y);
    f.v[s] = std::exp(cdouble(0, kmode * x));
  }
  EndoField df = deriv_anti(g, f, 0);
  const double sym = std::sin(kmode * g.hD) / g.hD;
  double worst = 0;
  for (std::size_t s = 0; s < g.nsites(); ++s) {
    cdouble want = cdouble(0, 0.5 * sym) * f.v[s];  // d/dwbar = (dx + i dy)/2
    worst = std::max(worst, std::abs(df.v[s] - want));
  }
  CHECK(worst < 1e-13);
  // the symbol approximates ik/2 at second order
  CHECK(std::abs(0.5 * sym - 0.5 * kmode) < 0.5 * kmode * kmode * kmode * g.hD * g.hD / 6.0 * 1.01);

  // linear in s has constant ds-derivative, including the one-sided rows
  LatticeChart cyl = cyl_chart(6, 8, 4);
  EndoField lin(cyl.nsites(), 1);
  for (std::size_t s = 0; s < cyl.nsites(); ++s) lin.v[s] = cdouble(cyl.s_of(s), 0.0);
  EndoField dlin = deriv_holo(cyl, lin, 1);  // w = s + i alpha
  for (std::size_t s = 0; s < cyl.nsites(); ++s)
    CHECK(std::abs(dlin.v[s] - cdouble(0.5, 0.0)) < 1e-12);
  (void)tw;
}

TEST_CASE("twisted Dolbeault operator") {
  LatticeChart g = torus_chart(10);
  HolomorphicTwist tw = HolomorphicTwist::gauge(g, 2, 9, 0.2);
  // identity-valued fields commute with the twist: dbar_a Id = 0
  EndoField id = EndoField::identity(g.nsites(), 2);
  OneFormField did = dolbeault(g, id, tw);
  for (auto& z : did.v) CHECK(std::abs(z) < 1e-14);

  // a generic field picks up the commutator term
  Prng rng(4);
  EndoField f(g.nsites(), 2);
  std::vector<cdouble> M(4);
  rng.hermitian(M.data(), 2, 1.0);
  for (std::size_t s = 0; s < g.nsites(); ++s) {
    double x, y;
    torus_xy(g, s, &x, &y);
    for (int t = 0; t < 4; ++t) f.at(s)[t] = std::cos(x + y) * M[t];
  }
  OneFormField with = dolbeault(g, f, tw);
  OneFormField without = dolbeault(g, f, HolomorphicTwist::none(g, 2));
  double diff = 0, base = 0;
  for (std::size_t i = 0; i < with.v.size(); ++i) {
    diff = std::max(diff, std::abs(with.v[i] - without.v[i]));
    base = std::max(base, std::abs(without.v[i]));
  }
  CHECK(diff > 1e-6);  // the commutator term is present
  CHECK(base > 0);

  // the conjugate operator reduces to d/dw on flat untwisted data
  OneFormField conj =
      dolbeault_conj(g, f, HolomorphicTwist::none(g, 2), EndoField::identity(g.nsites(), 2));
  for (std::size_t s = 0; s < g.nsites(); ++s) {
    EndoField dh = deriv_holo(g, f, 0);
    for (int t = 0; t < 4; ++t) CHECK(std::abs(conj.at(s, 0)[t] - dh.at(s)[t]) < 1e-14);
  }
}

TEST_CASE("curvature: flat bundle, abelian oracle, refinement order") {
  // H = Id, a = 0 -> F = 0
  {
    LatticeChart g = torus_chart(8);
    HolomorphicTwist tw = HolomorphicTwist::none(g, 2);
    EndoField h = EndoField::identity(g.nsites(), 2);
    CurvatureField f = curvature(g, h, tw);
    double worst = 0;
    for (auto& z : f.v) worst = std::max(worst, std::abs(z));
    CHECK(worst == 0.0);
  }

  // r=1, H = e^u: F_hat matches (i/2)(u_xx + u_yy) at order 2
  auto fhat_error = [&](int n) {
    LatticeChart g = torus_chart(n);
    HolomorphicTwist tw = HolomorphicTwist::none(g, 1);
    EndoField h(g.nsites(), 1);
    for (std::size_t s = 0; s < g.nsites(); ++s) {
      double x, y;
      torus_xy(g, s, &x, &y);
      h.v[s] = std::exp(0.2 * std::cos(x) + 0.1 * std::sin(y));
    }
    CurvatureField f = curvature(g, h, tw);
    EndoField fhat = lambda_contract(f);
    double worst = 0;
    for (std::size_t s = 0; s < g.nsites(); ++s) {
      double x, y;
      torus_xy(g, s, &x, &y);
      const double lap = -0.2 * std::cos(x) - 0.1 * std::sin(y);  // u_xx + u_yy
      cdouble want = cdouble(0, 0.5) * lap;
      worst = std::max(worst, std::abs(fhat.v[s] - want));
    }
    return worst;
  };
  double e16 = fhat_error(16), e32 = fhat_error(32);
  CHECK(e16 / e32 > 3.5);
  CHECK(e16 / e32 < 4.5);

  // singular H names the site
  {
    LatticeChart g = torus_chart(8);
    HolomorphicTwist tw = HolomorphicTwist::none(g, 1);
    EndoField h = EndoField::identity(g.nsites(), 1);
    h.v[5] = cdouble(0, 0);
    CHECK_THROWS_WITH_AS(curvature(g, h, tw), doctest::Contains("site 5"), std::domain_error);
  }
}

TEST_CASE("first-order variation of curvature has quadratic remainder") {
  // The exact linearization of the potential A_j(H) per site,
  //   dA_j = -H^{-1} d H^{-1} D_j H + H^{-1} D_j d + H^{-1} d H^{-1} a_j^+ H - H^{-1} a_j^+ d,
  // is the discrete form of d_H(tau); the curvature is linear in A, so the
  // residual after subtracting eps * dF must be exactly quadratic in eps.
  LatticeChart g = torus_chart(10);
  Prng rng(4);
  HolomorphicTwist tw = HolomorphicTwist::exact(g, 2, 99, 0.2);
  const int r = 2;
  EndoField h(g.nsites(), r);
  for (std::size_t s = 0; s < g.nsites(); ++s) mat_identity(h.at(s), r);
  // smooth Hermitian perturbation direction
  EndoField dir(g.nsites(), r);
  std::vector<cdouble> M(r * r);
  rng.hermitian(M.data(), r, 1.0);
  for (std::size_t s = 0; s < g.nsites(); ++s) {
    double x, y;
    torus_xy(g, s, &x, &y);
    const double w = std::cos(x) + 0.5 * std::sin(y);
    for (int t = 0; t < r * r; ++t) dir.at(s)[t] = w * M[t];
  }

  // analytic dA per direction and orientation, then dF averaged over the
  // same staggered pairs the curvature uses
  EndoField hinv = field_inverse(g, h);
  const int n = g.ncomplex();
  auto make_dA = [&](Stencil st) {
    std::vector<EndoField> dA;
    for (int j = 0; j < n; ++j) {
      EndoField dh = deriv_holo(g, h, j, st);
      EndoField dd = deriv_holo(g, dir, j, st);
      EndoField out(g.nsites(), r);
      for (std::size_t s = 0; s < g.nsites(); ++s) {
        std::vector<cdouble> t1(r * r), t2(r * r), t3(r * r), adag(r * r);
        mat_adjoint(adag.data(), tw.a.at(s, j), r);
        mat_mul(t3.data(), hinv.at(s), dir.at(s), r);  // H^{-1} d
        mat_mul(t1.data(), t3.data(), hinv.at(s), r);
        mat_mul(t2.data(), t1.data(), dh.at(s), r);
        for (int t = 0; t < r * r; ++t) out.at(s)[t] -= t2[t];
        mat_mul(t1.data(), hinv.at(s), dd.at(s), r);
        for (int t = 0; t < r * r; ++t) out.at(s)[t] += t1[t];
        mat_mul(t1.data(), t3.data(), hinv.at(s), r);
        mat_mul(t2.data(), t1.data(), adag.data(), r);
        mat_mul(t1.data(), t2.data(), h.at(s), r);
        for (int t = 0; t < r * r; ++t) out.at(s)[t] += t1[t];
        mat_mul(t1.data(), hinv.at(s), adag.data(), r);
        mat_mul(t2.data(), t1.data(), dir.at(s), r);
        for (int t = 0; t < r * r; ++t) out.at(s)[t] -= t2[t];
      }
      dA.push_back(std::move(out));
    }
    return dA;
  };
  std::vector<EndoField> dF(static_cast<size_t>(n) * n, EndoField(g.nsites(), r));
  const Stencil holo[2] = {Stencil::forward, Stencil::backward};
  const Stencil anti[2] = {Stencil::backward, Stencil::forward};
  for (int o = 0; o < 2; ++o) {
    std::vector<EndoField> dA = make_dA(holo[o]);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        EndoField term = deriv_anti(g, dA[j], k, anti[o]);
        for (auto& z : term.v) z = -z;
        for (std::size_t s = 0; s < g.nsites(); ++s) {
          const cdouble* da = dA[j].at(s);
          const cdouble* ak = tw.a.at(s, k);
          cdouble* t = term.at(s);
          cdouble* acc_out = dF[static_cast<size_t>(j) * n + k].at(s);
          for (int p = 0; p < r; ++p)
            for (int q = 0; q < r; ++q) {
              cdouble acc(0);
              for (int z = 0; z < r; ++z)
                acc += da[p * r + z] * ak[z * r + q] - ak[p * r + z] * da[z * r + q];
              acc_out[p * r + q] += 0.5 * (t[p * r + q] + acc);
            }
        }
      }
  }

  CurvatureField f0 = curvature_raw(g, h, tw);
  auto remainder = [&](double eps) {
    EndoField hp = h;
    for (std::size_t i = 0; i < hp.v.size(); ++i) hp.v[i] += eps * dir.v[i];
    CurvatureField f1 = curvature_raw(g, hp, tw);
    double worst = 0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (std::size_t s = 0; s < g.nsites(); ++s)
          for (int t = 0; t < r * r; ++t) {
            cdouble got = f1.at(s, j, k)[t] - f0.at(s, j, k)[t];
            cdouble pred = eps * dF[static_cast<size_t>(j) * n + k].at(s)[t];
            worst = std::max(worst, std::abs(got - pred));
          }
    return worst;
  };
  double r1 = remainder(0.05), r2 = remainder(0.025);
  CHECK(r1 / r2 > 3.4);  // quadratic in eps
  CHECK(r1 / r2 < 4.6);
  CHECK(r1 < 0.05);      // and small in absolute terms
}

TEST_CASE("curvature reality is exact after symmetrization") {
  LatticeChart g = cyl_chart(6, 6, 4);
  HolomorphicTwist tw = HolomorphicTwist::gauge(g, 2, 5, 0.3);
  Prng rng(17);
  EndoField h(g.nsites(), 2);
  for (std::size_t s = 0; s < g.nsites(); ++s) {
    std::vector<cdouble> x(4), e(4);
    rng.hermitian(x.data(), 2, 0.2);
    mat_exp(e.data(), x.data(), 2);
    for (int t = 0; t < 4; ++t) h.at(s)[t] = 0.5 * (e[t] + std::conj(e[(t % 2) * 2 + t / 2]));
  }
  CurvatureField f = curvature(g, h, tw);
  EndoField hinv = field_inverse(g, h);
  double worst = 0;
  for (std::size_t s = 0; s < g.nsites(); ++s) {
    std::vector<cdouble> t1(4), t2(4), t3(4);
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        mat_adjoint(t1.data(), f.at(s, j, k), 2);
        mat_mul(t2.data(), hinv.at(s), t1.data(), 2);
        mat_mul(t3.data(), t2.data(), h.at(s), 2);
        for (int t = 0; t < 4; ++t)
          worst = std::max(worst, std::abs(t3[t] - f.at(s, k, j)[t]));
      }
  }
  CHECK(worst < 1e-10);

  // i F_hat is H-Hermitian to the same accuracy
  EndoField fhat = lambda_contract(f);
  worst = 0;
  for (std::size_t s = 0; s < g.nsites(); ++s) {
    std::vector<cdouble> m(4), t1(4), t2(4), t3(4);
    for (int t = 0; t < 4; ++t) m[t] = cdouble(0, 1) * fhat.at(s)[t];
    mat_adjoint(t1.data(), m.data(), 2);
    mat_mul(t2.data(), hinv.at(s), t1.data(), 2);
    mat_mul(t3.data(), t2.data(), h.at(s), 2);
    for (int t = 0; t < 4; ++t) worst = std::max(worst, std::abs(t3[t] - m[t]));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("lambda contraction of the Kaehler form itself") {
  for (int m : {1, 2}) {
    LatticeChart g = torus_chart(6, m);
    const int n = g.ncomplex();
    CurvatureField f(g.nsites(), n, 2);
    for (std::size_t s = 0; s < g.nsites(); ++s)
      for (int j = 0; j < n; ++j) {
        f.at(s, j, j)[0] = cdouble(0, 0.5);
        f.at(s, j, j)[3] = cdouble(0, 0.5);
      }
    EndoField fh = lambda_contract(f);
    for (std::size_t s = 0; s < g.nsites(); ++s) {
      CHECK(std::abs(fh.at(s)[0] - cdouble(n, 0)) < 1e-14);
      CHECK(std::abs(fh.at(s)[1]) == 0.0);
      CHECK(std::abs(fh.at(s)[3] - cdouble(n, 0)) < 1e-14);
    }
    // primitive: off-diagonal only, or traceless diagonal
    CurvatureField p(g.nsites(), n, 1);
    if (n >= 2)
      for (std::size_t s = 0; s < g.nsites(); ++s) {
        p.at(s, 0, 0)[0] = cdouble(0.7, 0.1);
        p.at(s, 1, 1)[0] = cdouble(-0.7, -0.1);
      }
    EndoField ph = lambda_contract(p);
    for (auto& z : ph.v) CHECK(std::abs(z) < 1e-14);
  }
}

TEST_CASE("Kaehler Laplacian: constants, symbol, linear ramp") {
  LatticeChart g = torus_chart(16);
  EndoField c(g.nsites(), 1);
  for (auto& z : c.v) z = cdouble(3, 1);
  EndoField lc = kahler_laplacian_flat(g, c);
  for (auto& z : lc.v) CHECK(std::abs(z) < 1e-13);

  const int kmode = 2;
  EndoField f(g.nsites(), 1);
  for (std::size_t s = 0; s < g.nsites(); ++s) {
    double x, y;
    torus_xy(g, s, &x, &y);
    f.v[s] = std::exp(cdouble(0, kmode * x));
  }
  EndoField lf = kahler_laplacian_flat(g, f);
  // compact symbol: the staggered composite averages to 4 sin^2(kh/2)/h^2
  const double sym = 2.0 * (1.0 - std::cos(kmode * g.hD)) / (g.hD * g.hD);
  double worst = 0;
  for (std::size_t s = 0; s < g.nsites(); ++s)
    worst = std::max(worst, std::abs(lf.v[s] - sym * f.v[s]));
  CHECK(worst < 1e-12);
  CHECK(std::abs(sym - kmode * kmode) < 1.01 * std::pow(kmode, 4) * g.hD * g.hD / 3.0);

  // s-coordinate ramp is harmonic on the interior rows
  LatticeChart cyl = cyl_chart(6, 8, 4);
  EndoField lin(cyl.nsites(), 1);
  for (std::size_t s = 0; s < cyl.nsites(); ++s) lin.v[s] = cdouble(cyl.s_of(s), 0.0);
  EndoField ll = kahler_laplacian_flat(cyl, lin);
  for (std::size_t s = 0; s < cyl.nsites(); ++s) {
    int si = cyl.s_index(s);
    if (si >= 2 && si < cyl.Ns - 2) CHECK(std::abs(ll.v[s]) < 1e-12);
  }
}

TEST_CASE("summation by parts is exact for the graph calculus") {
  for (bool cylinder : {false, true}) {
    LatticeChart g = cylinder ? cyl_chart(6, 6, 4) : torus_chart(8);
    Prng rng(cylinder ? 2 : 3);
    ScalarField f(g.nsites()), h(g.nsites());
    for (std::size_t s = 0; s < g.nsites(); ++s) {
      f.v[s] = rng.gaussian();
      h.v[s] = rng.gaussian();
    }
    double lhs = scalar_dot(g, graph_laplacian(g, f), h);
    double rhs = grad_dot(g, f, h);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("twists: integrability and envelope") {
  LatticeChart g = cyl_chart(8, 10, 4);
  HolomorphicTwist ex = HolomorphicTwist::exact(g, 2, 11, 0.1);
  CHECK(ex.integrability_residual(g) < 1e-14);
  CHECK(ex.envelope_constant(g) < 10.0);
  CHECK(ex.envelope_constant(g) > 0.0);

  // gauge twists are integrable at discretization order: the residual falls
  // at second order once the alpha spacing is resolved
  LatticeChart mid = cyl_chart(16, 19, 8);
  mid.hs = 0.125;  // same S = (Ns-1) hs as the coarse chart
  LatticeChart fine = cyl_chart(32, 37, 16);
  fine.hs = 0.0625;
  HolomorphicTwist gc = HolomorphicTwist::gauge(g, 2, 12, 0.1);
  HolomorphicTwist gm = HolomorphicTwist::gauge(mid, 2, 12, 0.1);
  HolomorphicTwist gf = HolomorphicTwist::gauge(fine, 2, 12, 0.1);
  const double rc = gc.integrability_residual(g);
  const double rm = gm.integrability_residual(mid);
  const double rf = gf.integrability_residual(fine);
  CHECK(rc > 0.0);
  CHECK(rc < 0.1);
  CHECK(rm < rc);
  CHECK(rm / rf > 2.5);
  CHECK(rm / rf < 6.0);

  HolomorphicTwist none = HolomorphicTwist::none(g, 2);
  CHECK(none.integrability_residual(g) == 0.0);
}

TEST_CASE("field serialization round-trips") {
  LatticeChart g = cyl_chart(5, 6, 3);
  Prng rng(8);
  EndoField f(g.nsites(), 2);
  for (auto& z : f.v) z = rng.cgaussian();
  const std::string path = "/tmp/g2flow_test_field.bin";
  write_field(path, g, f);
  EndoField back = read_field(path);
  REQUIRE(back.v.size() == f.v.size());
  CHECK(back.r == 2);
  for (std::size_t i = 0; i < f.v.size(); ++i) CHECK(back.v[i] == f.v[i]);
}

TEST_CASE("config parsing and twist construction") {
  RunSetup s = parse_config_text(
      "# sample\n m = 1\n n_d = 8\n h_d = 0.5\n n_s = 6\n n_alpha = 4\n h_s = 0.3\n"
      " rank = 2\n seed = 7\n twist.kind = exact\n twist.amp = 0.05\n flow.t_end = 0.25\n");
  CHECK(s.geom.nD == 8);
  CHECK(s.geom.Ns == 6);
  CHECK(s.rank == 2);
  CHECK(s.seed == 7);
  CHECK(s.flow.t_end == 0.25);
  HolomorphicTwist tw = build_twist(s);
  CHECK_FALSE(tw.zero);
  // resolved text is stable under re-parsing
  RunSetup s2 = parse_config_text(s.text);
  CHECK(s2.text == s.text);
}
