#include "g2flow/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace g2flow {

#if defined(G2FLOW_BUILD_AVX2)
const Kernels* kernels_avx2_impl();
#endif

bool kernels_avx2_available() {
#if defined(G2FLOW_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Kernels* kernels_avx2() {
#if defined(G2FLOW_BUILD_AVX2)
  return kernels_avx2_available() ? kernels_avx2_impl() : nullptr;
#else
  return nullptr;
#endif
}

namespace {
const Kernels* pick() {
  const char* env = std::getenv("G2FLOW_KERNEL");
  if (env && std::strcmp(env, "scalar") == 0) return &kernels_scalar();
  if (env && std::strcmp(env, "avx2") == 0) {
    if (const Kernels* k = kernels_avx2()) return k;
    return &kernels_scalar();
  }
  if (const Kernels* k = kernels_avx2()) return k;
  return &kernels_scalar();
}
}  // namespace

const Kernels& kernels() {
  static const Kernels* active = pick();
  return *active;
}

}  // namespace g2flow
