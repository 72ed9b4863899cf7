#include "g2flow/field.hpp"

#include <cmath>
#include <cstring>

#include "g2flow/smallmat.hpp"

namespace g2flow {

EndoField EndoField::identity(std::size_t nsites, int rank) {
  EndoField f(nsites, rank);
  for (std::size_t s = 0; s < nsites; ++s) mat_identity(f.at(s), rank);
  return f;
}

EndoField slice_endo(const LatticeChart& g, const EndoField& f, int si, int ai) {
  std::size_t ts = g.torus_sites();
  EndoField out(ts, f.r);
  std::size_t start = g.slice_start(si, ai);
  std::memcpy(out.v.data(), f.v.data() + start * f.block(), ts * f.block() * sizeof(cdouble));
  return out;
}

double max_hermiticity_defect(const EndoField& h) {
  double worst = 0;
  const int r = h.r;
  for (std::size_t s = 0; s < h.sites; ++s) {
    const cdouble* m = h.at(s);
    for (int i = 0; i < r; ++i)
      for (int j = i; j < r; ++j) {
        double d = std::abs(m[i * r + j] - std::conj(m[j * r + i]));
        if (d > worst) worst = d;
      }
  }
  return worst;
}

double min_eigenvalue(const EndoField& h) {
  double worst = 1e300;
  for (std::size_t s = 0; s < h.sites; ++s)
    worst = std::min(worst, smallest_eigenvalue_hermitian(h.at(s), h.r));
  return worst;
}

double max_det_defect(const EndoField& h) {
  double worst = 0;
  for (std::size_t s = 0; s < h.sites; ++s)
    worst = std::max(worst, std::abs(mat_det(h.at(s), h.r) - cdouble(1)));
  return worst;
}

}  // namespace g2flow
