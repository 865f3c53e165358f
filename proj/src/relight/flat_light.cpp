#include <algorithm>
#include <cmath>

#include "lumikit/errors.hpp"
#include "lumikit/relight.hpp"
#include "lumikit/simd/kernels.hpp"

namespace lumikit {

FlatLightResult apply_flat_light(const LinearImage& image, const IlluminantRgb& illuminant) {
    LinearImage out(image.width(), image.height());
    const auto& gains = illuminant.gains();
    simd::active_kernels().scale_rgb(image.data().data(), out.data().data(), image.pixel_count(),
                                     gains.data());
    std::size_t clipped = 0;
    const auto px = out.data();
    for (std::size_t p = 0; p < image.pixel_count(); ++p) {
        if (px[3 * p] > 1.0 || px[3 * p + 1] > 1.0 || px[3 * p + 2] > 1.0) ++clipped;
    }
    return {std::move(out), clipped};
}

SoftMask downsample_mask(const BinaryMap& mask, int target_width, int target_height) {
    if (target_width <= 0 || target_height <= 0) {
        throw ValidationError("downsample target dimensions must be positive");
    }
    if (target_width > mask.width() || target_height > mask.height()) {
        throw ValidationError("downsample target must not exceed the source size");
    }

    struct Tap {
        int src;
        double weight;
    };
    // Overlap of source cell [i, i+1) with target cell [t*s, (t+1)*s) for s = src/dst.
    auto axis_taps = [](int src, int dst) {
        std::vector<std::vector<Tap>> taps(static_cast<std::size_t>(dst));
        const double scale = static_cast<double>(src) / dst;
        for (int t = 0; t < dst; ++t) {
            const double lo = t * scale;
            const double hi = (t + 1) * scale;
            const int first = static_cast<int>(std::floor(lo));
            const int last = std::min(src - 1, static_cast<int>(std::ceil(hi)) - 1);
            for (int i = first; i <= last; ++i) {
                const double w = std::min(hi, i + 1.0) - std::max(lo, static_cast<double>(i));
                if (w > 0.0) taps[t].push_back({i, w / scale});
            }
        }
        return taps;
    };

    const auto xt = axis_taps(mask.width(), target_width);
    const auto yt = axis_taps(mask.height(), target_height);
    std::vector<double> out(static_cast<std::size_t>(target_width) * target_height);
    for (int ty = 0; ty < target_height; ++ty) {
        for (int tx = 0; tx < target_width; ++tx) {
            double acc = 0.0;
            for (const Tap& wy : yt[ty]) {
                double row = 0.0;
                for (const Tap& wx : xt[tx]) row += wx.weight * (mask.at(wx.src, wy.src) ? 1.0 : 0.0);
                acc += wy.weight * row;
            }
            out[static_cast<std::size_t>(ty) * target_width + tx] = std::clamp(acc, 0.0, 1.0);
        }
    }
    return SoftMask(target_width, target_height, std::move(out));
}

}  // namespace lumikit
