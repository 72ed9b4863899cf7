#include "g2flow/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace g2flow {

void mat_identity(cdouble* a, int r) {
  std::fill(a, a + r * r, cdouble(0));
  for (int i = 0; i < r; ++i) a[i * r + i] = cdouble(1);
}

void mat_mul(cdouble* c, const cdouble* a, const cdouble* b, int r) {
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      cdouble s(0);
      for (int k = 0; k < r; ++k) s += a[i * r + k] * b[k * r + j];
      c[i * r + j] = s;
    }
}

void mat_adjoint(cdouble* out, const cdouble* a, int r) {
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) out[i * r + j] = std::conj(a[j * r + i]);
}

cdouble mat_trace(const cdouble* a, int r) {
  cdouble s(0);
  for (int i = 0; i < r; ++i) s += a[i * r + i];
  return s;
}

double mat_frob2(const cdouble* a, int r) {
  double s = 0;
  for (int i = 0; i < r * r; ++i) s += std::norm(a[i]);
  return s;
}

void mat_inverse(cdouble* out, const cdouble* a, int r) {
  std::vector<cdouble> m(a, a + r * r);
  mat_identity(out, r);
  for (int col = 0; col < r; ++col) {
    int pivot = col;
    double best = std::abs(m[col * r + col]);
    for (int i = col + 1; i < r; ++i) {
      double v = std::abs(m[i * r + col]);
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best < 1e-300) throw std::domain_error("mat_inverse: singular matrix");
    if (pivot != col) {
      for (int j = 0; j < r; ++j) {
        std::swap(m[pivot * r + j], m[col * r + j]);
        std::swap(out[pivot * r + j], out[col * r + j]);
      }
    }
    cdouble inv = cdouble(1) / m[col * r + col];
    for (int j = 0; j < r; ++j) {
      m[col * r + j] *= inv;
      out[col * r + j] *= inv;
    }
    for (int i = 0; i < r; ++i) {
      if (i == col) continue;
      cdouble f = m[i * r + col];
      if (f == cdouble(0)) continue;
      for (int j = 0; j < r; ++j) {
        m[i * r + j] -= f * m[col * r + j];
        out[i * r + j] -= f * out[col * r + j];
      }
    }
  }
}

cdouble mat_det(const cdouble* a, int r) {
  std::vector<cdouble> m(a, a + r * r);
  cdouble det(1);
  for (int col = 0; col < r; ++col) {
    int pivot = col;
    double best = std::abs(m[col * r + col]);
    for (int i = col + 1; i < r; ++i) {
      double v = std::abs(m[i * r + col]);
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best == 0.0) return cdouble(0);
    if (pivot != col) {
      for (int j = 0; j < r; ++j) std::swap(m[pivot * r + j], m[col * r + j]);
      det = -det;
    }
    det *= m[col * r + col];
    cdouble inv = cdouble(1) / m[col * r + col];
    for (int i = col + 1; i < r; ++i) {
      cdouble f = m[i * r + col] * inv;
      for (int j = col; j < r; ++j) m[i * r + j] -= f * m[col * r + j];
    }
  }
  return det;
}

void hermitian_eig(const cdouble* a, int r, double* evals, cdouble* vecs) {
  std::vector<cdouble> m(a, a + r * r);
  std::vector<cdouble> v(r * r);
  mat_identity(v.data(), r);
  // cyclic Jacobi with complex rotations
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0;
    for (int p = 0; p < r; ++p)
      for (int q = p + 1; q < r; ++q) off += std::norm(m[p * r + q]);
    if (off < 1e-30) break;
    for (int p = 0; p < r; ++p)
      for (int q = p + 1; q < r; ++q) {
        cdouble apq = m[p * r + q];
        if (std::abs(apq) < 1e-300) continue;
        double app = m[p * r + p].real();
        double aqq = m[q * r + q].real();
        // U = P.R with P = diag(1, conj(phase)) absorbing the phase of the
        // pivot and R the real Jacobi rotation for the resulting block
        double absq = std::abs(apq);
        cdouble ph = apq / absq;
        cdouble phc = std::conj(ph);
        double theta = 0.5 * std::atan2(2.0 * absq, app - aqq);
        double c = std::cos(theta), s = std::sin(theta);
        // columns: M <- M.U, U[.][p] = (c, s*phc), U[.][q] = (-s, c*phc)
        for (int k = 0; k < r; ++k) {
          cdouble mk_p = m[k * r + p], mk_q = m[k * r + q];
          m[k * r + p] = c * mk_p + s * phc * mk_q;
          m[k * r + q] = -s * mk_p + c * phc * mk_q;
        }
        // rows: M <- U^dagger . M
        for (int k = 0; k < r; ++k) {
          cdouble mp_k = m[p * r + k], mq_k = m[q * r + k];
          m[p * r + k] = c * mp_k + s * ph * mq_k;
          m[q * r + k] = -s * mp_k + c * ph * mq_k;
        }
        for (int k = 0; k < r; ++k) {
          cdouble vk_p = v[k * r + p], vk_q = v[k * r + q];
          v[k * r + p] = c * vk_p + s * phc * vk_q;
          v[k * r + q] = -s * vk_p + c * phc * vk_q;
        }
      }
  }
  std::vector<int> order(r);
  for (int i = 0; i < r; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return m[x * r + x].real() < m[y * r + y].real(); });
  for (int i = 0; i < r; ++i) evals[i] = m[order[i] * r + order[i]].real();
  if (vecs) {
    for (int i = 0; i < r; ++i)
      for (int k = 0; k < r; ++k) vecs[k * r + i] = v[k * r + order[i]];
  }
}

void mat_exp(cdouble* out, const cdouble* a, int r) {
  // scale so the scaled norm is below 1/2, Taylor to machine precision, square back
  double nrm = std::sqrt(mat_frob2(a, r));
  int squarings = 0;
  double scale = 1.0;
  while (nrm * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  std::vector<cdouble> x(r * r), term(r * r), acc(r * r), tmp(r * r);
  for (int i = 0; i < r * r; ++i) x[i] = a[i] * scale;
  mat_identity(acc.data(), r);
  mat_identity(term.data(), r);
  for (int k = 1; k <= 24; ++k) {
    mat_mul(tmp.data(), term.data(), x.data(), r);
    double inv = 1.0 / k;
    for (int i = 0; i < r * r; ++i) term[i] = tmp[i] * inv;
    double tn = 0;
    for (int i = 0; i < r * r; ++i) {
      acc[i] += term[i];
      tn += std::norm(term[i]);
    }
    if (tn < 1e-34) break;
  }
  for (int s = 0; s < squarings; ++s) {
    mat_mul(tmp.data(), acc.data(), acc.data(), r);
    acc.swap(tmp);
  }
  std::memcpy(out, acc.data(), sizeof(cdouble) * r * r);
}

namespace {
template <typename F>
void hermitian_function(cdouble* out, const cdouble* a, int r, F f) {
  std::vector<double> ev(r);
  std::vector<cdouble> vv(r * r);
  hermitian_eig(a, r, ev.data(), vv.data());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      cdouble s(0);
      for (int k = 0; k < r; ++k) s += vv[i * r + k] * f(ev[k]) * std::conj(vv[j * r + k]);
      out[i * r + j] = s;
    }
}
}  // namespace

void mat_exp_hermitian(cdouble* out, const cdouble* a, int r) {
  hermitian_function(out, a, r, [](double x) { return std::exp(x); });
}

void mat_sqrt_posdef(cdouble* out, const cdouble* a, int r) {
  hermitian_function(out, a, r, [](double x) {
    if (x <= 0) throw std::domain_error("mat_sqrt_posdef: matrix not positive definite");
    return std::sqrt(x);
  });
}

void mat_invsqrt_posdef(cdouble* out, const cdouble* a, int r) {
  hermitian_function(out, a, r, [](double x) {
    if (x <= 0) throw std::domain_error("mat_invsqrt_posdef: matrix not positive definite");
    return 1.0 / std::sqrt(x);
  });
}

void mat_log_posdef(cdouble* out, const cdouble* a, int r) {
  hermitian_function(out, a, r, [](double x) {
    if (x <= 0) throw std::domain_error("mat_log_posdef: matrix not positive definite");
    return std::log(x);
  });
}

double smallest_eigenvalue_hermitian(const cdouble* a, int r) {
  std::vector<double> ev(r);
  hermitian_eig(a, r, ev.data(), nullptr);
  return ev[0];
}

}  // namespace g2flow
