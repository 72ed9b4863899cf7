#pragma once

#include <array>
#include <complex>
#include <vector>

#include "g2flow/exterior.hpp"

namespace g2flow {

using cdouble = std::complex<double>;

// Numeric 2-forms on R^7 with r x r complex matrix coefficients, expressed on
// the 21 basis forms e^{ij} (i<j). All structure tables are generated once
// from the exact-rational module, so the floating-point layer inherits its
// conventions bit for bit.
struct G2Tables {
  std::array<std::array<double, 21>, 21> tmap;    // T = -*( . ^ phi0)
  std::array<std::array<double, 21>, 21> pplus;   // (T+1)/3
  std::array<std::array<double, 21>, 21> pminus;  // (2-T)/3
  // kappa pairing: e^a ^ e^b ^ phi0 = w3[a][b] * e^{1..7}
  std::array<std::array<double, 21>, 21> w3;
  // e^a ^ *phi0 = sum_c w6[a][c] * e^{1..c^..7} (c = omitted index, 0-based)
  std::array<std::array<double, 7>, 21> w6;
  std::array<std::array<int, 2>, 21> pair;  // pair index -> (i,j), 0-based
  int pair_index[7][7];                     // (i,j) -> pair index

  static const G2Tables& get();
};

// matrix-valued 2-form: 21 coefficient matrices, row-major r x r each
struct Form2Matrix7 {
  int r = 1;
  std::vector<cdouble> v;  // 21 * r*r
  explicit Form2Matrix7(int rank = 1) : r(rank), v(21 * rank * rank, cdouble(0)) {}
  cdouble* comp(int a) { return v.data() + static_cast<size_t>(a) * r * r; }
  const cdouble* comp(int a) const { return v.data() + static_cast<size_t>(a) * r * r; }
};

struct ChernWeilReport {
  double ym = 0;          // ||F||^2 = ||F+||^2 + ||F-||^2
  double norm_plus2 = 0;  // ||F+||^2
  double norm_minus2 = 0; // ||F-||^2
  double kappa = 0;       // integral of tr F^2 ^ phi0 in the phi0-orientation
  double ym_split_residual = 0;    // |YM - (3||F+||^2 + kappa)|
  double kappa_identity_residual = 0;  // |kappa - (||F-||^2 - 2||F+||^2)|
};

Form2Matrix7 g2_project(const Form2Matrix7& f, bool plus);
double g2_norm2(const Form2Matrix7& f);
ChernWeilReport chern_weil_report(const Form2Matrix7& f);

// || F ^ *phi0 || over the 7 six-form components; zero iff F+ = 0
double instanton_residual(const Form2Matrix7& f);

// Embed an n-complex-dimensional (1,1) component array F_{j kbar} (row-major
// n x n blocks of r x r matrices) into the 7-frame, mapping complex direction
// j to dz^{j+1} of the standard frame (dz1 = e7 + i e5, dz2 = e1 + i e3,
// dz3 = e2 + i e4).
Form2Matrix7 embed_one_one(int n, int r, const std::vector<cdouble>& f);

}  // namespace g2flow
