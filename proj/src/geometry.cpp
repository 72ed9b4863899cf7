#include "g2flow/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace g2flow {

void LatticeChart::validate() const {
  if (m < 1 || m > 2) throw std::invalid_argument("LatticeChart: m must be 1 or 2");
  if (nD < 3) throw std::invalid_argument("LatticeChart: nD must be >= 3");
  if (hD <= 0) throw std::invalid_argument("LatticeChart: hD must be positive");
  if (Ns != 0) {
    if (Ns < 4) throw std::invalid_argument("LatticeChart: Ns must be 0 or >= 4");
    if (Nalpha < 3) throw std::invalid_argument("LatticeChart: Nalpha must be >= 3");
    if (hs <= 0 || halpha <= 0) throw std::invalid_argument("LatticeChart: spacings positive");
  }
}

std::size_t LatticeChart::torus_sites() const {
  std::size_t t = 1;
  for (int k = 0; k < 2 * m; ++k) t *= static_cast<std::size_t>(nD);
  return t;
}

std::size_t LatticeChart::nsites() const {
  std::size_t t = torus_sites();
  if (Ns > 0) t *= static_cast<std::size_t>(Ns) * static_cast<std::size_t>(Nalpha);
  return t;
}

double LatticeChart::cell_volume() const {
  double v = 1;
  for (int k = 0; k < 2 * m; ++k) v *= hD;
  if (Ns > 0) v *= hs * halpha;
  return v;
}

double LatticeChart::min_spacing() const {
  double h = hD;
  if (Ns > 0) {
    h = std::min(h, hs);
    h = std::min(h, halpha);
  }
  return h;
}

LatticeChart::Axis LatticeChart::axis(int k) const {
  Axis a{};
  if (k < 2 * m) {
    a.length = nD;
    a.h = hD;
    a.periodic = true;
    a.stride = 1;
    for (int i = 0; i < k; ++i) a.stride *= static_cast<std::size_t>(nD);
    return a;
  }
  if (Ns == 0) throw std::out_of_range("LatticeChart: no cylinder axes");
  if (k == 2 * m) {  // alpha
    a.length = Nalpha;
    a.h = halpha;
    a.periodic = true;
    a.stride = torus_sites();
    return a;
  }
  if (k == 2 * m + 1) {  // s
    a.length = Ns;
    a.h = hs;
    a.periodic = false;
    a.stride = torus_sites() * static_cast<std::size_t>(Nalpha);
    return a;
  }
  throw std::out_of_range("LatticeChart: axis index");
}

std::array<int, 2> LatticeChart::complex_axes(int j) const {
  if (j < m) return {2 * j, 2 * j + 1};
  if (j == m && Ns > 0) return {2 * m + 1, 2 * m};  // w = s + i alpha
  throw std::out_of_range("LatticeChart: complex direction");
}

std::size_t LatticeChart::slice_start(int si, int ai) const {
  return (static_cast<std::size_t>(si) * Nalpha + ai) * torus_sites();
}

int LatticeChart::s_index(std::size_t site) const {
  if (Ns == 0) return 0;
  return static_cast<int>(site / (torus_sites() * static_cast<std::size_t>(Nalpha)));
}

bool LatticeChart::on_s_boundary(std::size_t site) const {
  if (Ns == 0) return false;
  int si = s_index(site);
  return si == 0 || si == Ns - 1;
}

LatticeChart LatticeChart::cross_section() const {
  LatticeChart c = *this;
  c.Ns = 0;
  c.Nalpha = 1;
  return c;
}

std::string LatticeChart::describe(std::size_t site) const {
  std::string out = "site " + std::to_string(site) + " (";
  std::size_t rest = site;
  std::size_t ts = torus_sites();
  if (Ns > 0) {
    std::size_t slab = ts * static_cast<std::size_t>(Nalpha);
    out += "s=" + std::to_string(rest / slab);
    rest %= slab;
    out += ", a=" + std::to_string(rest / ts);
    rest %= ts;
  }
  for (int k = 0; k < 2 * m; ++k) {
    out += (k ? "," : ", x=") + std::to_string(rest % nD);
    rest /= nD;
  }
  return out + ")";
}

}  // namespace g2flow
