#include "g2flow/kernels.hpp"

#include <immintrin.h>

// Complex lanes are interleaved re/im pairs; one __m256d holds two complex
// doubles. Multiplies use mul+addsub (no FMA) so results match the scalar
// path operation for operation.

namespace g2flow {
namespace {

inline __m256d cmul256(__m256d v, __m256d wr, __m256d wi) {
  // v = [x0r,x0i,x1r,x1i], wr/wi = broadcast real/imag parts of w per lane pair
  __m256d t1 = _mm256_mul_pd(v, wr);
  __m256d vs = _mm256_permute_pd(v, 0x5);  // [x0i,x0r,x1i,x1r]
  __m256d t2 = _mm256_mul_pd(vs, wi);
  return _mm256_addsub_pd(t1, t2);
}

void csub_scale_v(cdouble* out, const cdouble* a, const cdouble* b, cdouble s, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  const __m256d sr = _mm256_set1_pd(s.real());
  const __m256d si = _mm256_set1_pd(s.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    __m256d d = _mm256_sub_pd(va, vb);
    _mm256_storeu_pd(po + 2 * i, cmul256(d, sr, si));
  }
  for (; i < n; ++i) out[i] = (a[i] - b[i]) * s;
}

void caxpby_v(cdouble* out, cdouble a, const cdouble* x, cdouble b, const cdouble* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  const double* py = reinterpret_cast<const double*>(y);
  double* po = reinterpret_cast<double*>(out);
  const __m256d ar = _mm256_set1_pd(a.real()), ai = _mm256_set1_pd(a.imag());
  const __m256d br = _mm256_set1_pd(b.real()), bi = _mm256_set1_pd(b.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(px + 2 * i);
    __m256d vy = _mm256_loadu_pd(py + 2 * i);
    __m256d r = _mm256_add_pd(cmul256(vx, ar, ai), cmul256(vy, br, bi));
    _mm256_storeu_pd(po + 2 * i, r);
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void cacc_v(cdouble* y, cdouble a, const cdouble* x, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(a.real()), ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(px + 2 * i);
    __m256d vy = _mm256_loadu_pd(py + 2 * i);
    _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(vy, cmul256(vx, ar, ai)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void cmul_v(cdouble* out, const cdouble* x, const cdouble* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  const double* py = reinterpret_cast<const double*>(y);
  double* po = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(px + 2 * i);
    __m256d vy = _mm256_loadu_pd(py + 2 * i);
    // per-element complex multiply: split y into re/im broadcasts lane-wise
    __m256d yr = _mm256_permute_pd(vy, 0x0);   // [y0r,y0r,y1r,y1r]
    __m256d yi = _mm256_permute_pd(vy, 0xF);   // [y0i,y0i,y1i,y1i]
    _mm256_storeu_pd(po + 2 * i, cmul256(vx, yr, yi));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    out[i] = cdouble(xr * yr - xi * yi, xr * yi + xi * yr);
  }
}

double sum_abs2_v(const cdouble* x, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(px + 2 * i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double r = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) r += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return r;
}

void matmul2_batch_v(cdouble* c, const cdouble* a, const cdouble* b, std::size_t nmat) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* pc = reinterpret_cast<double*>(c);
  for (std::size_t k = 0; k < nmat; ++k) {
    const double* A = pa + 8 * k;
    const double* B = pb + 8 * k;
    __m256d brow0 = _mm256_loadu_pd(B);      // [B00, B01]
    __m256d brow1 = _mm256_loadu_pd(B + 4);  // [B10, B11]
    __m256d r0 = _mm256_add_pd(cmul256(brow0, _mm256_set1_pd(A[0]), _mm256_set1_pd(A[1])),
                               cmul256(brow1, _mm256_set1_pd(A[2]), _mm256_set1_pd(A[3])));
    __m256d r1 = _mm256_add_pd(cmul256(brow0, _mm256_set1_pd(A[4]), _mm256_set1_pd(A[5])),
                               cmul256(brow1, _mm256_set1_pd(A[6]), _mm256_set1_pd(A[7])));
    _mm256_storeu_pd(pc + 8 * k, r0);
    _mm256_storeu_pd(pc + 8 * k + 4, r1);
  }
}

}  // namespace

const Kernels* kernels_avx2_impl() {
  static const Kernels k = {csub_scale_v, caxpby_v, cacc_v, cmul_v, sum_abs2_v, matmul2_batch_v,
                            "avx2"};
  return &k;
}

}  // namespace g2flow
