#include <cmath>
#include <string>
#include <vector>

#include "lumikit/errors.hpp"
#include "lumikit/eval.hpp"
#include "lumikit/simd/kernels.hpp"

namespace lumikit {

namespace {

constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::vector<double> window_taps() {
    std::vector<double> taps(2 * kSsimRadius + 1);
    double sum = 0.0;
    for (int k = -kSsimRadius; k <= kSsimRadius; ++k) {
        taps[k + kSsimRadius] = std::exp(-0.5 * k * k / (kSsimSigma * kSsimSigma));
        sum += taps[k + kSsimRadius];
    }
    for (double& t : taps) t /= sum;
    return taps;
}

std::vector<double> gaussian_filter(int width, int height, const std::vector<double>& plane) {
    static const std::vector<double> taps = window_taps();
    const auto& k = simd::active_kernels();
    std::vector<double> tmp(plane.size()), out(plane.size());
    k.convolve_rows(plane.data(), tmp.data(), width, height, taps.data(), kSsimRadius);
    k.convolve_cols(tmp.data(), out.data(), width, height, taps.data(), kSsimRadius);
    return out;
}

}  // namespace

double ssim_plane(int width, int height, std::span<const double> a, std::span<const double> b,
                  const ForegroundMask* mask) {
    constexpr int window = 2 * kSsimRadius + 1;
    if (width < window || height < window) {
        throw ValidationError("image " + std::to_string(width) + "x" + std::to_string(height) +
                              " is smaller than the 11x11 SSIM window");
    }
    const std::size_t n = static_cast<std::size_t>(width) * height;
    if (a.size() != n || b.size() != n) throw ValidationError("SSIM inputs differ in size");
    if (mask && (mask->width() != width || mask->height() != height)) {
        throw ValidationError("SSIM mask differs in size from the images");
    }

    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::vector<double> xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto ux = gaussian_filter(width, height, x);
    const auto uy = gaussian_filter(width, height, y);
    const auto uxx = gaussian_filter(width, height, xx);
    const auto uyy = gaussian_filter(width, height, yy);
    const auto uxy = gaussian_filter(width, height, xy);

    double sum = 0.0;
    std::size_t count = 0;
    for (int r = kSsimRadius; r < height - kSsimRadius; ++r) {
        for (int c = kSsimRadius; c < width - kSsimRadius; ++c) {
            if (mask && !mask->at(c, r)) continue;
            const std::size_t i = static_cast<std::size_t>(r) * width + c;
            const double vx = uxx[i] - ux[i] * ux[i];
            const double vy = uyy[i] - uy[i] * uy[i];
            const double vxy = uxy[i] - ux[i] * uy[i];
            const double num = (2.0 * ux[i] * uy[i] + kC1) * (2.0 * vxy + kC2);
            const double den = (ux[i] * ux[i] + uy[i] * uy[i] + kC1) * (vx + vy + kC2);
            sum += num / den;
            ++count;
        }
    }
    if (count == 0) throw DegenerateError("no SSIM window centre lies in the foreground");
    return sum / static_cast<double>(count);
}

double ssim(const LinearImage& a, const LinearImage& b, const ForegroundMask* mask,
            const SsimOptions& options) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw ValidationError("SSIM inputs differ in size");
    }
    if (!options.per_channel) {
        return ssim_plane(a.width(), a.height(), a.luminance(), b.luminance(), mask);
    }
    const std::size_t n = a.pixel_count();
    std::vector<double> pa(n), pb(n);
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            pa[i] = a.data()[3 * i + c];
            pb[i] = b.data()[3 * i + c];
        }
        total += ssim_plane(a.width(), a.height(), pa, pb, mask);
    }
    return total / 3.0;
}

}  // namespace lumikit
