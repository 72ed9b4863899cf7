#pragma once

#include <complex>
#include <vector>

#include "g2flow/geometry.hpp"

namespace g2flow {

using cdouble = std::complex<double>;

// Per-site r x r complex matrices, site-major, row-major entries. Also used
// for Hermitian metric fields H (positivity checked by the flow monitors,
// not by the container).
struct EndoField {
  int r = 1;
  std::size_t sites = 0;
  std::vector<cdouble> v;

  EndoField() = default;
  EndoField(std::size_t nsites, int rank)
      : r(rank), sites(nsites), v(nsites * rank * rank, cdouble(0)) {}

  cdouble* at(std::size_t site) { return v.data() + site * r * r; }
  const cdouble* at(std::size_t site) const { return v.data() + site * r * r; }
  std::size_t block() const { return static_cast<std::size_t>(r) * r; }

  static EndoField identity(std::size_t nsites, int rank);
};

// one matrix per complexified direction ((1,0) or (0,1) according to use)
struct OneFormField {
  int r = 1;
  int n = 0;  // complex directions
  std::size_t sites = 0;
  std::vector<cdouble> v;

  OneFormField() = default;
  OneFormField(std::size_t nsites, int ncomplex, int rank)
      : r(rank), n(ncomplex), sites(nsites), v(nsites * ncomplex * rank * rank, cdouble(0)) {}

  cdouble* at(std::size_t site, int j) { return v.data() + (site * n + j) * r * r; }
  const cdouble* at(std::size_t site, int j) const { return v.data() + (site * n + j) * r * r; }
  // contiguous per-component view over all sites is NOT available in this
  // layout; operators build components one at a time in scratch EndoFields.
};

// (1,1) components F_{j kbar}, j,k in 0..n-1
struct CurvatureField {
  int r = 1;
  int n = 0;
  std::size_t sites = 0;
  std::vector<cdouble> v;

  CurvatureField() = default;
  CurvatureField(std::size_t nsites, int ncomplex, int rank)
      : r(rank), n(ncomplex), sites(nsites),
        v(nsites * ncomplex * ncomplex * rank * rank, cdouble(0)) {}

  cdouble* at(std::size_t site, int j, int k) {
    return v.data() + ((site * n + j) * n + k) * r * r;
  }
  const cdouble* at(std::size_t site, int j, int k) const {
    return v.data() + ((site * n + j) * n + k) * r * r;
  }
};

using MetricField = EndoField;

// per-site real scalars (lambda-bar, e-hat, profiles)
struct ScalarField {
  std::size_t sites = 0;
  std::vector<double> v;
  ScalarField() = default;
  explicit ScalarField(std::size_t nsites) : sites(nsites), v(nsites, 0.0) {}
};

// contiguous cross-section slice of a field at fixed (s, alpha)
EndoField slice_endo(const LatticeChart& g, const EndoField& f, int si, int ai);

double max_hermiticity_defect(const EndoField& h);
double min_eigenvalue(const EndoField& h);
double max_det_defect(const EndoField& h);  // max |det - 1|

}  // namespace g2flow
