#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace g2flow {

using cdouble = std::complex<double>;

// Data-parallel inner loops over flat complex arrays. Scalar reference
// implementations and an AVX2 variant share this table; the active table is
// chosen once at startup from CPUID (override with G2FLOW_KERNEL=scalar|avx2).
// Equivalence of the two paths is part of the test suite.
struct Kernels {
  // out[i] = (a[i] - b[i]) * s          (central-difference core)
  void (*csub_scale)(cdouble* out, const cdouble* a, const cdouble* b, cdouble s, std::size_t n);
  // out[i] = a*x[i] + b*y[i]
  void (*caxpby)(cdouble* out, cdouble a, const cdouble* x, cdouble b, const cdouble* y, std::size_t n);
  // y[i] += a*x[i]
  void (*cacc)(cdouble* y, cdouble a, const cdouble* x, std::size_t n);
  // out[i] = x[i]*y[i]                  (elementwise; rank-1 matmul batch)
  void (*cmul)(cdouble* out, const cdouble* x, const cdouble* y, std::size_t n);
  // sum of |x[i]|^2
  double (*sum_abs2)(const cdouble* x, std::size_t n);
  // C_k = A_k * B_k for nmat row-major 2x2 complex matrices
  void (*matmul2_batch)(cdouble* c, const cdouble* a, const cdouble* b, std::size_t nmat);

  const char* name;
};

const Kernels& kernels();              // active table
const Kernels& kernels_scalar();       // always available
bool kernels_avx2_available();         // compiled in and supported by this CPU
const Kernels* kernels_avx2();         // nullptr if unavailable

}  // namespace g2flow
