#pragma once

#include "raidkit/kernels.hpp"

namespace raidkit::kernels::detail {

const KernelTable& scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
#endif
#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

}  // namespace raidkit::kernels::detail
