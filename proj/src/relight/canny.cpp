#include <cmath>
#include <string>
#include <vector>

#include "lumikit/errors.hpp"
#include "lumikit/relight.hpp"
#include "lumikit/simd/kernels.hpp"

namespace lumikit {

namespace {

// Relative magnitudes are snapped to multiples of 2^-24 of the maximum so that
// non-maximum suppression ties survive the rounding noise of rescaled inputs.
constexpr double kRelativeQuantum = 16777216.0;
constexpr double kTan22_5 = 0.41421356237309503;
constexpr double kTan67_5 = 2.414213562373095;

std::vector<double> gaussian_taps(double sigma, int radius) {
    std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        taps[k + radius] = std::exp(-static_cast<double>(k * k) / (2.0 * sigma * sigma));
        sum = sum + taps[k + radius];
    }
    for (double& t : taps) t = t / sum;
    return taps;
}

}  // namespace

void CannyParams::validate() const {
    if (!(low_threshold > 0.0 && low_threshold < high_threshold)) {
        throw ValidationError("Canny thresholds must satisfy 0 < low < high");
    }
    if (!(blur_sigma > 0.0) || !std::isfinite(blur_sigma)) {
        throw ValidationError("Canny blur sigma must be positive");
    }
}

int CannyParams::blur_radius() const { return static_cast<int>(std::ceil(3.0 * blur_sigma)); }

EdgeMap canny_edges(const LinearImage& image, const CannyParams& params) {
    const auto lum = image.luminance();
    return canny_edges_plane(image.width(), image.height(), lum, params);
}

EdgeMap canny_edges_plane(int width, int height, std::span<const double> lum,
                          const CannyParams& params) {
    params.validate();
    const int radius = params.blur_radius();
    const int kernel = 2 * radius + 1;
    if (width < kernel || height < kernel) {
        throw ValidationError("image " + std::to_string(width) + "x" + std::to_string(height) +
                              " is smaller than the " + std::to_string(kernel) + "x" +
                              std::to_string(kernel) + " blur kernel");
    }
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (lum.size() != n) throw ValidationError("luminance plane size mismatch");

    const auto taps = gaussian_taps(params.blur_sigma, radius);
    const auto& k = simd::active_kernels();
    std::vector<double> tmp(n), blurred(n);
    k.convolve_rows(lum.data(), tmp.data(), width, height, taps.data(), radius);
    k.convolve_cols(tmp.data(), blurred.data(), width, height, taps.data(), radius);

    auto px = [&](int x, int y) {
        x = std::clamp(x, 0, width - 1);
        y = std::clamp(y, 0, height - 1);
        return blurred[static_cast<std::size_t>(y) * width + x];
    };

    std::vector<double> gx(n), gy(n), mag(n);
    double max_mag = 0.0;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double right = px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1);
            const double left = px(x - 1, y - 1) + 2.0 * px(x - 1, y) + px(x - 1, y + 1);
            const double down = px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1);
            const double up = px(x - 1, y - 1) + 2.0 * px(x, y - 1) + px(x + 1, y - 1);
            const std::size_t i = static_cast<std::size_t>(y) * width + x;
            gx[i] = right - left;
            gy[i] = down - up;
            mag[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
            if (mag[i] > max_mag) max_mag = mag[i];
        }
    }

    EdgeMap edges(width, height);
    double low = params.low_threshold;
    double high = params.high_threshold;
    if (params.relative) {
        if (max_mag == 0.0) return edges;
        for (double& m : mag) m = std::nearbyint(m / max_mag * kRelativeQuantum);
        low *= kRelativeQuantum;
        high *= kRelativeQuantum;
    }

    // 0 = suppressed, 1 = weak, 2 = strong.
    std::vector<std::uint8_t> cls(n, 0);
    for (int y = 1; y < height - 1; ++y) {
        for (int x = 1; x < width - 1; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * width + x;
            const double m = mag[i];
            if (!(m >= low)) continue;
            const double ax = std::abs(gx[i]);
            const double ay = std::abs(gy[i]);
            int dx = 0;
            int dy = 0;
            if (ay <= kTan22_5 * ax) {
                dx = 1;
            } else if (ay > kTan67_5 * ax) {
                dy = 1;
            } else if ((gx[i] > 0.0) == (gy[i] > 0.0)) {
                dx = 1;
                dy = 1;
            } else {
                dx = 1;
                dy = -1;
            }
            const double before = mag[static_cast<std::size_t>(y - dy) * width + (x - dx)];
            const double after = mag[static_cast<std::size_t>(y + dy) * width + (x + dx)];
            if (m > before && m >= after) cls[i] = m >= high ? 2 : 1;
        }
    }

    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < n; ++i) {
        if (cls[i] == 2) stack.push_back(i);
    }
    std::vector<std::uint8_t> out(n, 0);
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        if (out[i]) continue;
        out[i] = 1;
        const int x = static_cast<int>(i % width);
        const int y = static_cast<int>(i / width);
        for (int oy = -1; oy <= 1; ++oy) {
            for (int ox = -1; ox <= 1; ++ox) {
                const int nx = x + ox;
                const int ny = y + oy;
                if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
                const std::size_t j = static_cast<std::size_t>(ny) * width + nx;
                if (cls[j] != 0 && !out[j]) stack.push_back(j);
            }
        }
    }
    return EdgeMap(width, height, std::move(out));
}

double edge_disagreement(const EdgeMap& a, const EdgeMap& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw ValidationError("edge maps differ in size");
    }
    const auto da = a.data();
    const auto db = b.data();
    std::size_t diff = 0;
    for (std::size_t i = 0; i < da.size(); ++i) diff += da[i] != db[i];
    return static_cast<double>(diff) / static_cast<double>(da.size());
}

EdgeInvariance invariance_under_flat_light(const LinearImage& image,
                                           const IlluminantRgb& illuminant,
                                           const CannyParams& params, double tolerance) {
    const EdgeMap before = canny_edges(image, params);
    const EdgeMap after = canny_edges(apply_flat_light(image, illuminant).image, params);
    const double d = edge_disagreement(before, after);
    return {d, d < tolerance};
}

}  // namespace lumikit
