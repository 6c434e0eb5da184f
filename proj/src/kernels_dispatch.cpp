#include <cstdlib>
#include <string_view>

#include "pilotwave/kernels.hpp"

namespace pilotwave::kern {

#ifdef PILOTWAVE_HAVE_AVX2
extern const Kernels g_avx2_kernels;
#endif

const Kernels* avx2_kernels() {
#ifdef PILOTWAVE_HAVE_AVX2
  if (__builtin_cpu_supports("avx2")) return &g_avx2_kernels;
#endif
  return nullptr;
}

const Kernels& active() {
  static const Kernels& picked = []() -> const Kernels& {
    const char* env = std::getenv("PILOTWAVE_KERNELS");
    if (env && std::string_view(env) == "scalar") return scalar_kernels();
    if (const Kernels* a = avx2_kernels()) return *a;
    return scalar_kernels();
  }();
  return picked;
}

}  // namespace pilotwave::kern
