#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace g2flow {

// Discrete asymptotically cylindrical chart: flat torus cross-section of
// complex dimension m (m in {1,2}) times an optional truncated cylinder
// [0,S] x S^1. Site order: torus coordinates fastest, then alpha, then s, so
// a cross-section slice at fixed (s,alpha) is contiguous.
//
// Complex directions: j < m are torus pairs (x_{2j}, x_{2j+1}); if the
// cylinder is present, direction m is w = s + i alpha. The Kaehler form is
// the standard one on every pair; omega_infty = kappa_I + ds^dalpha.
struct LatticeChart {
  int m = 1;        // complex dimension of the cross-section
  int nD = 8;       // sites per torus direction
  double hD = 1.0;  // torus spacing
  int Ns = 0;       // cylinder s-sites (0: pure torus, fully periodic)
  int Nalpha = 1;
  double hs = 1.0;
  double halpha = 1.0;

  struct Axis {
    int length;
    std::size_t stride;  // in sites
    double h;
    bool periodic;
  };

  void validate() const;

  int ncomplex() const { return Ns > 0 ? m + 1 : m; }
  int naxes() const { return Ns > 0 ? 2 * m + 2 : 2 * m; }
  std::size_t torus_sites() const;
  std::size_t nsites() const;
  double S() const { return Ns > 1 ? (Ns - 1) * hs : 0.0; }
  double cell_volume() const;
  double min_spacing() const;

  Axis axis(int k) const;               // torus axes 0..2m-1, then alpha, then s
  // real axes of complex direction j: (u, v)
  std::array<int, 2> complex_axes(int j) const;

  std::size_t slice_start(int si, int ai) const;  // contiguous torus slice
  int s_index(std::size_t site) const;
  double s_of(std::size_t site) const { return s_index(site) * hs; }
  bool on_s_boundary(std::size_t site) const;

  // pure-torus chart with the same cross-section (used for slice operators)
  LatticeChart cross_section() const;

  std::string describe(std::size_t site) const;  // for error messages
};

}  // namespace g2flow
