#include "kernels_impl.hpp"

namespace sfhf::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(SFHF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& detect() {
  if (const KernelTable* t = table(Backend::Avx2)) return *t;
  if (const KernelTable* t = table(Backend::Neon)) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable* table(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return &scalar_table();
    case Backend::Avx2:
#if defined(SFHF_HAVE_AVX2)
      if (cpu_has_avx2()) return &avx2_table();
#endif
      return nullptr;
    case Backend::Neon:
#if defined(SFHF_HAVE_NEON)
      return &neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable& chosen = detect();
  return chosen;
}

}  // namespace sfhf::kernels
