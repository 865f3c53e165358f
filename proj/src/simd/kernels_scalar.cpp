#include <algorithm>

#include "kernels_internal.hpp"

namespace lumikit::simd {

namespace scalar {

void scale_rgb(const double* in, double* out, std::size_t pixels, const double* gains) {
    for (std::size_t p = 0; p < pixels; ++p) {
        out[3 * p] = in[3 * p] * gains[0];
        out[3 * p + 1] = in[3 * p + 1] * gains[1];
        out[3 * p + 2] = in[3 * p + 2] * gains[2];
    }
}

void squared_diff(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        out[i] = d * d;
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t body = n - n % 4;
    for (std::size_t i = 0; i < body; i += 4) {
        for (std::size_t l = 0; l < 4; ++l) lane[l] = lane[l] + a[i + l] * b[i + l];
    }
    double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    for (std::size_t i = body; i < n; ++i) sum = sum + a[i] * b[i];
    return sum;
}

void weighted_gradient(const double* pred, const double* target, const double* w, double* out,
                       std::size_t n, double count) {
    for (std::size_t i = 0; i < n; ++i) out[i] = ((2.0 * w[i]) * (pred[i] - target[i])) / count;
}

void convolve_row_span(const double* row, double* out, int width, const double* taps, int radius,
                       int x_begin, int x_end) {
    for (int x = x_begin; x < x_end; ++x) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
            const int sx = std::clamp(x + k, 0, width - 1);
            acc = acc + taps[k + radius] * row[sx];
        }
        out[x] = acc;
    }
}

void convolve_rows(const double* in, double* out, int width, int height, const double* taps,
                   int radius) {
    for (int y = 0; y < height; ++y) {
        const std::size_t off = static_cast<std::size_t>(y) * static_cast<std::size_t>(width);
        convolve_row_span(in + off, out + off, width, taps, radius, 0, width);
    }
}

void convolve_col_span(const double* in, double* out, int width, int height, const double* taps,
                       int radius, int y, int x_begin, int x_end) {
    for (int x = x_begin; x < x_end; ++x) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
            const int sy = std::clamp(y + k, 0, height - 1);
            acc = acc + taps[k + radius] *
                            in[static_cast<std::size_t>(sy) * static_cast<std::size_t>(width) +
                               static_cast<std::size_t>(x)];
        }
        out[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(x)] = acc;
    }
}

void convolve_cols(const double* in, double* out, int width, int height, const double* taps,
                   int radius) {
    for (int y = 0; y < height; ++y) {
        convolve_col_span(in, out, width, height, taps, radius, y, 0, width);
    }
}

}  // namespace scalar

const KernelTable& scalar_kernels() noexcept {
    static const KernelTable table{
        Isa::scalar,         "scalar",
        scalar::scale_rgb,   scalar::squared_diff,
        scalar::dot,         scalar::weighted_gradient,
        scalar::convolve_rows, scalar::convolve_cols,
    };
    return table;
}

}  // namespace lumikit::simd
