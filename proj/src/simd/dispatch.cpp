#include <cstdlib>
#include <string_view>

#include "homog/simd/kernels.hpp"

namespace homog::simd {

#if defined(HOMOG_HAVE_AVX2)
const KernelSet& avx2_kernel_set();
#endif

const KernelSet* avx2_kernels() {
#if defined(HOMOG_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &avx2_kernel_set() : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet& active_kernels() {
  static const KernelSet* chosen = [] {
    const char* env = std::getenv("HOMOG1D_SIMD");
    if (env && std::string_view(env) == "scalar") return &scalar_kernels();
    if (const KernelSet* wide = avx2_kernels()) return wide;
    return &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace homog::simd
