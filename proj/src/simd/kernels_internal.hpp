#pragma once

#include "lumikit/simd/kernels.hpp"

namespace lumikit::simd {

namespace scalar {
// Border helpers shared with SIMD variants so edge pixels round identically.
void convolve_row_span(const double* row, double* out, int width, const double* taps, int radius,
                       int x_begin, int x_end);
void convolve_col_span(const double* in, double* out, int width, int height, const double* taps,
                       int radius, int y, int x_begin, int x_end);
}  // namespace scalar

#if defined(LUMIKIT_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

}  // namespace lumikit::simd
