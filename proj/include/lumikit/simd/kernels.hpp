#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops. Every kernel has a scalar reference and may have
// SIMD variants; variants must produce bit-identical results to the scalar
// reference (same operation order per element, fixed 4-lane reduction tree,
// no fused multiply-add).

namespace lumikit::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    std::string_view name;

    /// out[3p+c] = in[3p+c] * gains[c] over `pixels` interleaved RGB pixels.
    void (*scale_rgb)(const double* in, double* out, std::size_t pixels, const double* gains);

    /// out[i] = (a[i] - b[i])^2
    void (*squared_diff)(const double* a, const double* b, double* out, std::size_t n);

    /// Sum of a[i]*b[i] accumulated in four interleaved lanes (lane = i mod 4
    /// for the first n - n%4 elements), lanes combined as (l0+l1)+(l2+l3),
    /// remaining tail elements added sequentially.
    double (*dot)(const double* a, const double* b, std::size_t n);

    /// out[i] = ((2 * w[i]) * (pred[i] - target[i])) / count
    void (*weighted_gradient)(const double* pred, const double* target, const double* w,
                              double* out, std::size_t n, double count);

    /// Horizontal convolution with clamp-to-edge borders, taps applied in
    /// order k = -radius..radius starting from 0.
    void (*convolve_rows)(const double* in, double* out, int width, int height,
                          const double* taps, int radius);

    /// Vertical counterpart of convolve_rows.
    void (*convolve_cols)(const double* in, double* out, int width, int height,
                          const double* taps, int radius);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the AVX2 variant is not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;

/// Best table for this CPU. Setting LUMIKIT_SIMD=scalar forces the scalar
/// reference. Resolved once per process.
const KernelTable& active_kernels() noexcept;

}  // namespace lumikit::simd
