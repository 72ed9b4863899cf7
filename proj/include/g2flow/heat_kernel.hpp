#pragma once

#include <string>

#include "g2flow/ops.hpp"

namespace g2flow {

struct HeatKernelReport {
  double diag_exponent = 0;   // fitted slope of log K_t(x,x) vs log t
  double expected_exponent = 0;  // -d/2
  bool diag_ok = false;       // within 10%
  double c0 = 0;              // fitted envelope constant
  double c_const = 5.0;       // Gaussian constant C
  int envelope_violations = 0;
  bool envelope_ok = false;
  std::string first_violation;  // offending (x, t) if any
};

// Discrete heat kernel on a flat periodic lattice, produced by explicit
// stepping of a delta density. Checks the diagonal power law t^{-d/2} over a
// time decade and a Gaussian envelope K <= C0 t^{-d/2} exp(-r^2/(C t)) with
// C = 5 and C0 fitted on the diagonal.
HeatKernelReport heat_kernel_diag_check(const LatticeChart& torus, int nsamples = 9);

}  // namespace g2flow
