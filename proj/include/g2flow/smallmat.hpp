#pragma once

#include <complex>
#include <vector>

namespace g2flow {

using cdouble = std::complex<double>;

// Helpers for small (r <= 8) row-major complex matrices used per lattice site.

void mat_identity(cdouble* a, int r);
void mat_mul(cdouble* c, const cdouble* a, const cdouble* b, int r);  // c must not alias
void mat_adjoint(cdouble* out, const cdouble* a, int r);
cdouble mat_trace(const cdouble* a, int r);
double mat_frob2(const cdouble* a, int r);  // sum |a_ij|^2

// Gaussian elimination with partial pivoting; throws std::domain_error on a
// numerically singular pivot.
void mat_inverse(cdouble* out, const cdouble* a, int r);
cdouble mat_det(const cdouble* a, int r);

// Cyclic Jacobi for Hermitian matrices; eigenvalues ascending, columns of
// vecs are the eigenvectors (vecs may be null).
void hermitian_eig(const cdouble* a, int r, double* evals, cdouble* vecs);

// exp(A) by scaling-and-squaring with a Taylor core; fine for the small,
// well-scaled exponents used here
void mat_exp(cdouble* out, const cdouble* a, int r);

// Hermitian functional calculus
void mat_exp_hermitian(cdouble* out, const cdouble* a, int r);
void mat_sqrt_posdef(cdouble* out, const cdouble* a, int r);     // and inverse sqrt
void mat_invsqrt_posdef(cdouble* out, const cdouble* a, int r);
// log of a positive-definite Hermitian matrix
void mat_log_posdef(cdouble* out, const cdouble* a, int r);

double smallest_eigenvalue_hermitian(const cdouble* a, int r);

}  // namespace g2flow
