#include "g2flow/energy.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>

#include "g2flow/parallel.hpp"
#include "g2flow/smallmat.hpp"

namespace g2flow {

double hodge_riemann_residual(const LatticeChart& g, const CurvatureField& f, const EndoField& h) {
  const int n = f.n;
  const int r = f.r;
  double worst = 0;
  for (std::size_t s = 0; s < f.sites; ++s) {
    double lhs, rhs;
    hodge_riemann_sides(n, r, f.at(s, 0, 0), h.at(s), &lhs, &rhs);
    double scale = 1.0 + std::abs(lhs) + std::abs(rhs);
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  (void)g;
  return worst;
}

EnergyReport chern_weil_lattice(const LatticeChart& g, const CurvatureField& f,
                                const EndoField& h) {
  const int n = f.n;
  const int r = f.r;
  EnergyReport rep;
  const double vol = g.cell_volume();
  double hr_worst = 0;
  for (std::size_t s = 0; s < f.sites; ++s) {
    // unitary-frame components: conjugate by H^{1/2}
    std::vector<cdouble> w(r * r), wi(r * r), t1(r * r);
    mat_sqrt_posdef(w.data(), h.at(s), r);
    mat_invsqrt_posdef(wi.data(), h.at(s), r);
    std::vector<cdouble> comps(static_cast<size_t>(n) * n * r * r);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        mat_mul(t1.data(), w.data(), f.at(s, j, k), r);
        mat_mul(comps.data() + (static_cast<size_t>(j) * n + k) * r * r, t1.data(), wi.data(), r);
      }
    Form2Matrix7 f7 = embed_one_one(n, r, comps);
    ChernWeilReport cw = chern_weil_report(f7);
    rep.ym += cw.ym * vol;
    rep.norm_plus2 += cw.norm_plus2 * vol;
    rep.norm_minus2 += cw.norm_minus2 * vol;
    rep.kappa += cw.kappa * vol;
    double lhs, rhs;
    hodge_riemann_sides(n, r, f.at(s, 0, 0), h.at(s), &lhs, &rhs);
    hr_worst = std::max(hr_worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs)));
  }
  rep.hodge_riemann_residual = hr_worst;
  rep.ym_split_residual =
      std::abs(rep.ym - (3.0 * rep.norm_plus2 + rep.kappa)) / (1.0 + rep.ym);
  return rep;
}

std::vector<double> energy_series(const LatticeChart& g, const HolomorphicTwist& tw,
                                  const std::vector<EndoField>& snapshots) {
  std::vector<double> out;
  if (snapshots.empty()) return out;
  CurvatureField f0 = curvature(g, snapshots[0], tw);
  EndoField h0inv = field_inverse(g, snapshots[0]);
  const double n0 = l2_of_scalar(g, curvature_norm2_field(g, f0, snapshots[0], h0inv));
  const double c0 = discrete_charge(g, f0, snapshots[0]);
  for (const EndoField& h : snapshots) {
    CurvatureField f = curvature(g, h, tw);
    EndoField hinv = field_inverse(g, h);
    const double nt = l2_of_scalar(g, curvature_norm2_field(g, f, h, hinv));
    const double ct = discrete_charge(g, f, h);
    out.push_back((nt - n0) - (ct - c0));
  }
  return out;
}

}  // namespace g2flow
