#include "g2flow/heat_kernel.hpp"

#include <cmath>
#include <vector>

namespace g2flow {

HeatKernelReport heat_kernel_diag_check(const LatticeChart& torus, int nsamples) {
  HeatKernelReport rep;
  const int d = 2 * torus.m;
  rep.expected_exponent = -0.5 * d;
  const double h = torus.hD;
  const double t_lo = 4.0 * h * h, t_hi = 40.0 * h * h;
  const double dt = 0.25 * h * h / d;

  // delta density at the origin
  ScalarField u(torus.nsites());
  u.v[0] = 1.0 / torus.cell_volume();

  // torus squared distance to the origin (minimum image)
  std::vector<double> r2(torus.nsites());
  for (std::size_t s = 0; s < torus.nsites(); ++s) {
    std::size_t rest = s;
    double acc = 0;
    for (int k = 0; k < d; ++k) {
      int x = static_cast<int>(rest % torus.nD);
      rest /= torus.nD;
      int dx = std::min(x, torus.nD - x);
      acc += (dx * h) * (dx * h);
    }
    r2[s] = acc;
  }

  std::vector<double> ts(nsamples), diag(nsamples);
  for (int i = 0; i < nsamples; ++i)
    ts[i] = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (nsamples - 1));

  double t = 0;
  int isample = 0;
  std::vector<std::vector<double>> fields;
  while (isample < nsamples) {
    if (t >= ts[isample] - 0.5 * dt) {
      diag[isample] = u.v[0];
      fields.push_back(u.v);
      ++isample;
      continue;
    }
    ScalarField lap = graph_laplacian(torus, u);
    for (std::size_t s = 0; s < u.sites; ++s) u.v[s] -= dt * lap.v[s];
    t += dt;
  }

  // log-log fit of the diagonal
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < nsamples; ++i) {
    double x = std::log(ts[i]), y = std::log(diag[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = nsamples * sxx - sx * sx;
  rep.diag_exponent = (nsamples * sxy - sx * sy) / det;
  rep.diag_ok = std::abs(rep.diag_exponent - rep.expected_exponent) <=
                0.1 * std::abs(rep.expected_exponent);

  // envelope constant fitted on the diagonal, then verified everywhere
  double c0 = 0;
  for (int i = 0; i < nsamples; ++i) c0 = std::max(c0, diag[i] * std::pow(ts[i], 0.5 * d));
  rep.c0 = 1.05 * c0;
  for (int i = 0; i < nsamples && rep.envelope_violations == 0; ++i) {
    for (std::size_t s = 0; s < torus.nsites(); ++s) {
      const double bound =
          rep.c0 * std::pow(ts[i], -0.5 * d) * std::exp(-r2[s] / (rep.c_const * ts[i]));
      if (fields[i][s] > bound + 1e-300) {
        ++rep.envelope_violations;
        rep.first_violation = "site " + std::to_string(s) + " t=" + std::to_string(ts[i]) +
                              " K=" + std::to_string(fields[i][s]) +
                              " bound=" + std::to_string(bound);
        break;
      }
    }
  }
  rep.envelope_ok = rep.envelope_violations == 0;
  return rep;
}

}  // namespace g2flow
