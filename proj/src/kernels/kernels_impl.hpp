#pragma once

#include "sfhf/kernels.hpp"

namespace sfhf::kernels {

#if defined(SFHF_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(SFHF_HAVE_NEON)
const KernelTable& neon_table();
#endif

}  // namespace sfhf::kernels
