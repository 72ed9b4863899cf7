#include "g2flow/kernels.hpp"

namespace g2flow {
namespace {

void csub_scale_s(cdouble* out, const cdouble* a, const cdouble* b, cdouble s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (a[i] - b[i]) * s;
}

void caxpby_s(cdouble* out, cdouble a, const cdouble* x, cdouble b, const cdouble* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void cacc_s(cdouble* y, cdouble a, const cdouble* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void cmul_s(cdouble* out, const cdouble* x, const cdouble* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    out[i] = cdouble(xr * yr - xi * yi, xr * yi + xi * yr);
  }
}

double sum_abs2_s(const cdouble* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return acc;
}

void matmul2_batch_s(cdouble* c, const cdouble* a, const cdouble* b, std::size_t nmat) {
  for (std::size_t k = 0; k < nmat; ++k) {
    const cdouble* A = a + 4 * k;
    const cdouble* B = b + 4 * k;
    cdouble* C = c + 4 * k;
    const cdouble c00 = A[0] * B[0] + A[1] * B[2];
    const cdouble c01 = A[0] * B[1] + A[1] * B[3];
    const cdouble c10 = A[2] * B[0] + A[3] * B[2];
    const cdouble c11 = A[2] * B[1] + A[3] * B[3];
    C[0] = c00; C[1] = c01; C[2] = c10; C[3] = c11;
  }
}

}  // namespace

const Kernels& kernels_scalar() {
  static const Kernels k = {csub_scale_s, caxpby_s, cacc_s, cmul_s, sum_abs2_s, matmul2_batch_s,
                            "scalar"};
  return k;
}

}  // namespace g2flow
