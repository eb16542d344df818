#pragma once

#include "afrac/simd.hpp"

namespace afrac::simd::detail {

const Kernels& scalar_kernels();
#if AFRAC_SIMD_X86
const Kernels& avx2_kernels();
#endif

}  // namespace afrac::simd::detail
