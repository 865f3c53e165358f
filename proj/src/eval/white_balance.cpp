#include <algorithm>
#include <cmath>
#include <charconv>

#include "lumikit/errors.hpp"
#include "lumikit/eval.hpp"
#include "lumikit/io.hpp"

namespace lumikit {

namespace {

LinearImage divide_channels(const LinearImage& image, const Vec3& gains) {
    LinearImage out(image.width(), image.height());
    const auto src = image.data();
    auto dst = out.data();
    for (std::size_t p = 0; p < image.pixel_count(); ++p) {
        for (int c = 0; c < 3; ++c) dst[3 * p + c] = src[3 * p + c] / gains[c];
    }
    return out;
}

Vec3 channel_means(const LinearImage& image) {
    Vec3 sum{0.0, 0.0, 0.0};
    const auto d = image.data();
    for (std::size_t p = 0; p < image.pixel_count(); ++p) {
        for (int c = 0; c < 3; ++c) sum[c] += d[3 * p + c];
    }
    for (double& s : sum) s /= static_cast<double>(image.pixel_count());
    return sum;
}

void require_nonzero(const Vec3& stat, const char* what) {
    static constexpr const char* kNames[] = {"red", "green", "blue"};
    for (int c = 0; c < 3; ++c) {
        if (!(stat[c] > 0.0) || !std::isfinite(stat[c])) {
            throw DegenerateError(std::string(what) + ": " + kNames[c] + " channel statistic is zero");
        }
    }
}

}  // namespace

WbMethod WbMethod::shades_of_gray(double p) {
    if (!std::isfinite(p) || p < 1.0) throw ValidationError("shades-of-gray p must be finite and >= 1");
    return {Kind::shades_of_gray, p, {}};
}

WbMethod WbMethod::parse(std::string_view text) {
    if (text == "gray_world") return gray_world();
    if (text == "white_patch") return white_patch();
    if (text.starts_with("sog:")) {
        const std::string_view num = text.substr(4);
        double p = 0.0;
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), p);
        if (ec != std::errc{} || ptr != num.data() + num.size()) {
            throw ValidationError("invalid shades-of-gray norm '" + std::string(num) + "'");
        }
        return shades_of_gray(p);
    }
    if (text.starts_with("external:") && text.size() > 9) {
        return external(std::filesystem::path(std::string(text.substr(9))));
    }
    throw ValidationError("unknown white-balance method '" + std::string(text) +
                          "'; expected gray_world, sog:<p>, white_patch or external:<dir>");
}

std::string WbMethod::to_string() const {
    switch (kind) {
        case Kind::gray_world: return "gray_world";
        case Kind::white_patch: return "white_patch";
        case Kind::shades_of_gray: {
            char buf[32];
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), p);
            return "sog:" + std::string(buf, ptr);
        }
        case Kind::external: return "external:" + external_dir.generic_string();
    }
    return "gray_world";
}

WhiteBalanceResult white_balance(const LinearImage& image, const WbMethod& method,
                                 const std::filesystem::path& external_image) {
    Vec3 stat{0.0, 0.0, 0.0};
    const auto d = image.data();
    const std::size_t n = image.pixel_count();
    switch (method.kind) {
        case WbMethod::Kind::gray_world:
            stat = channel_means(image);
            break;
        case WbMethod::Kind::shades_of_gray: {
            const double p = method.p;
            for (std::size_t i = 0; i < n; ++i) {
                for (int c = 0; c < 3; ++c) stat[c] += std::pow(d[3 * i + c], p);
            }
            for (double& s : stat) s = std::pow(s / static_cast<double>(n), 1.0 / p);
            break;
        }
        case WbMethod::Kind::white_patch:
            for (std::size_t i = 0; i < n; ++i) {
                for (int c = 0; c < 3; ++c) stat[c] = std::max(stat[c], d[3 * i + c]);
            }
            break;
        case WbMethod::Kind::external: {
            if (external_image.empty()) {
                throw ValidationError("external white balance needs a balanced image path");
            }
            LinearImage balanced = load_linear_image(external_image);
            if (balanced.width() != image.width() || balanced.height() != image.height()) {
                throw ValidationError("external balanced image '" + external_image.string() +
                                      "' differs in size from the original");
            }
            const Vec3 mo = channel_means(image);
            const Vec3 mb = channel_means(balanced);
            require_nonzero(mb, "external balanced image");
            const Vec3 ratio{mo[0] / mb[0], mo[1] / mb[1], mo[2] / mb[2]};
            require_nonzero(ratio, "external white balance");
            return {std::move(balanced), IlluminantRgb::from_gains(ratio)};
        }
    }
    require_nonzero(stat, "white balance");
    const IlluminantRgb gains = IlluminantRgb::from_gains(stat);
    return {divide_channels(image, gains.gains()), gains};
}

IlluminantRgb estimate_illuminant(const LinearImage& original, const LinearImage& balanced,
                                  const ForegroundMask& mask, RatioAggregation aggregation,
                                  double epsilon) {
    if (original.width() != balanced.width() || original.height() != balanced.height() ||
        mask.width() != original.width() || mask.height() != original.height()) {
        throw ValidationError("original, balanced image and mask must share dimensions");
    }
    if (mask.count() == 0) throw ValidationError("foreground mask is empty");

    const auto o = original.data();
    const auto b = balanced.data();
    const auto m = mask.data();
    Vec3 est{0.0, 0.0, 0.0};
    std::vector<double> ratios;
    ratios.reserve(mask.count());
    for (int c = 0; c < 3; ++c) {
        ratios.clear();
        for (std::size_t p = 0; p < m.size(); ++p) {
            if (!m[p]) continue;
            const double den = b[3 * p + c];
            if (den > epsilon) ratios.push_back(o[3 * p + c] / den);
        }
        if (ratios.empty()) {
            throw DegenerateError("every foreground pixel was excluded by the ratio floor");
        }
        if (aggregation == RatioAggregation::median) {
            const std::size_t mid = ratios.size() / 2;
            std::nth_element(ratios.begin(), ratios.begin() + static_cast<std::ptrdiff_t>(mid),
                             ratios.end());
            double value = ratios[mid];
            if (ratios.size() % 2 == 0) {
                const double lower =
                    *std::max_element(ratios.begin(), ratios.begin() + static_cast<std::ptrdiff_t>(mid));
                value = (lower + value) / 2.0;
            }
            est[c] = value;
        } else {
            std::sort(ratios.begin(), ratios.end());
            double sum = 0.0;
            for (double r : ratios) sum += r;
            est[c] = sum / static_cast<double>(ratios.size());
        }
    }
    if (!(est[0] > 0.0 && est[1] > 0.0 && est[2] > 0.0)) {
        throw DegenerateError("estimated illuminant has a zero channel");
    }
    return IlluminantRgb::from_gains(est);
}

}  // namespace lumikit
