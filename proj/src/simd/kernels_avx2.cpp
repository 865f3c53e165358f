// Compiled with -mavx2. Only mul/add/sub/div intrinsics are used so results
// match the scalar reference bit-for-bit.
#include <immintrin.h>

#include <algorithm>

#include "kernels_internal.hpp"

namespace lumikit::simd {

namespace {

void scale_rgb(const double* in, double* out, std::size_t pixels, const double* gains) {
    // Four RGB pixels span three registers with rotating gain patterns.
    const __m256d g0 = _mm256_setr_pd(gains[0], gains[1], gains[2], gains[0]);
    const __m256d g1 = _mm256_setr_pd(gains[1], gains[2], gains[0], gains[1]);
    const __m256d g2 = _mm256_setr_pd(gains[2], gains[0], gains[1], gains[2]);
    std::size_t p = 0;
    for (; p + 4 <= pixels; p += 4) {
        const double* src = in + 3 * p;
        double* dst = out + 3 * p;
        _mm256_storeu_pd(dst, _mm256_mul_pd(_mm256_loadu_pd(src), g0));
        _mm256_storeu_pd(dst + 4, _mm256_mul_pd(_mm256_loadu_pd(src + 4), g1));
        _mm256_storeu_pd(dst + 8, _mm256_mul_pd(_mm256_loadu_pd(src + 8), g2));
    }
    for (; p < pixels; ++p) {
        out[3 * p] = in[3 * p] * gains[0];
        out[3 * p + 1] = in[3 * p + 1] * gains[1];
        out[3 * p + 2] = in[3 * p + 2] * gains[2];
    }
}

void squared_diff(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(d, d));
    }
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        out[i] = d * d;
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t body = n - n % 4;
    for (std::size_t i = 0; i < body; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    for (std::size_t i = body; i < n; ++i) sum = sum + a[i] * b[i];
    return sum;
}

void weighted_gradient(const double* pred, const double* target, const double* w, double* out,
                       std::size_t n, double count) {
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d cnt = _mm256_set1_pd(count);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pred + i), _mm256_loadu_pd(target + i));
        const __m256d tw = _mm256_mul_pd(two, _mm256_loadu_pd(w + i));
        _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_mul_pd(tw, d), cnt));
    }
    for (; i < n; ++i) out[i] = ((2.0 * w[i]) * (pred[i] - target[i])) / count;
}

void convolve_rows(const double* in, double* out, int width, int height, const double* taps,
                   int radius) {
    const int interior_begin = std::min(radius, width);
    const int interior_end = std::max(interior_begin, width - radius);
    for (int y = 0; y < height; ++y) {
        const std::size_t off = static_cast<std::size_t>(y) * static_cast<std::size_t>(width);
        const double* row = in + off;
        double* dst = out + off;
        scalar::convolve_row_span(row, dst, width, taps, radius, 0, interior_begin);
        int x = interior_begin;
        for (; x + 4 <= interior_end; x += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (int k = -radius; k <= radius; ++k) {
                acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(taps[k + radius]),
                                                       _mm256_loadu_pd(row + x + k)));
            }
            _mm256_storeu_pd(dst + x, acc);
        }
        scalar::convolve_row_span(row, dst, width, taps, radius, x, width);
    }
}

void convolve_cols(const double* in, double* out, int width, int height, const double* taps,
                   int radius) {
    const std::size_t stride = static_cast<std::size_t>(width);
    for (int y = 0; y < height; ++y) {
        int x = 0;
        for (; x + 4 <= width; x += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (int k = -radius; k <= radius; ++k) {
                const int sy = std::clamp(y + k, 0, height - 1);
                acc = _mm256_add_pd(
                    acc, _mm256_mul_pd(_mm256_set1_pd(taps[k + radius]),
                                       _mm256_loadu_pd(in + static_cast<std::size_t>(sy) * stride +
                                                       static_cast<std::size_t>(x))));
            }
            _mm256_storeu_pd(out + static_cast<std::size_t>(y) * stride + static_cast<std::size_t>(x),
                             acc);
        }
        scalar::convolve_col_span(in, out, width, height, taps, radius, y, x, width);
    }
}

}  // namespace

const KernelTable& avx2_table() noexcept {
    static const KernelTable table{
        Isa::avx2,     "avx2",      scale_rgb,     squared_diff,
        dot,           weighted_gradient, convolve_rows, convolve_cols,
    };
    return table;
}

}  // namespace lumikit::simd
