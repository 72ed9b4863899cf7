#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace g2flow {

// splitmix64; deterministic across platforms, unlike the standard
// distributions
class Prng {
 public:
  explicit Prng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() {  // [0,1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  long long uniform_int(long long lo, long long hi) {  // inclusive bounds
    return lo + static_cast<long long>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
  }

  double gaussian() {
    double u1 = uniform(), u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  std::complex<double> cgaussian() {
    double u1 = uniform(), u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 6.283185307179586476925287 * u2;
    return {rad * std::cos(ang), rad * std::sin(ang)};
  }

  // random Hermitian r x r with entries O(scale)
  void hermitian(std::complex<double>* out, int r, double scale) {
    for (int i = 0; i < r; ++i) {
      out[i * r + i] = std::complex<double>(scale * gaussian(), 0.0);
      for (int j = i + 1; j < r; ++j) {
        std::complex<double> z = scale * cgaussian();
        out[i * r + j] = z;
        out[j * r + i] = std::conj(z);
      }
    }
  }

 private:
  uint64_t state_;
};

}  // namespace g2flow
