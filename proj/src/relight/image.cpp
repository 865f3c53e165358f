#include "lumikit/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lumikit/color.hpp"
#include "lumikit/errors.hpp"

namespace lumikit {

namespace {

void check_dims(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw ValidationError("image dimensions must be positive, got " +
                              std::to_string(width) + "x" + std::to_string(height));
    }
}

std::size_t area(int width, int height) {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

}  // namespace

LinearImage::LinearImage(int width, int height) : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(area(width, height) * 3, 0.0);
}

LinearImage::LinearImage(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != area(width, height) * 3) {
        throw ValidationError("image data length " + std::to_string(data_.size()) +
                              " does not match " + std::to_string(width) + "x" +
                              std::to_string(height) + "x3");
    }
    for (double v : data_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ValidationError("image values must be finite and nonnegative");
        }
    }
}

std::vector<double> LinearImage::luminance() const {
    std::vector<double> out(pixel_count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = lumikit::luminance(data_[3 * i], data_[3 * i + 1], data_[3 * i + 2]);
    }
    return out;
}

BinaryMap::BinaryMap(int width, int height) : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(area(width, height), 0);
}

BinaryMap::BinaryMap(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != area(width, height)) {
        throw ValidationError("binary map length does not match its dimensions");
    }
    for (auto v : data_) {
        if (v > 1) throw ValidationError("binary map values must be 0 or 1");
    }
}

std::size_t BinaryMap::count() const noexcept {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

ForegroundMask ForegroundMask::from_soft(int width, int height, std::span<const double> soft) {
    check_dims(width, height);
    if (soft.size() != area(width, height)) {
        throw ValidationError("soft mask length does not match its dimensions");
    }
    std::vector<std::uint8_t> bits(soft.size());
    for (std::size_t i = 0; i < soft.size(); ++i) bits[i] = soft[i] >= 0.5 ? 1 : 0;
    return ForegroundMask(width, height, std::move(bits));
}

ForegroundMask ForegroundMask::full(int width, int height) {
    check_dims(width, height);
    return ForegroundMask(width, height, std::vector<std::uint8_t>(area(width, height), 1));
}

SoftMask::SoftMask(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != area(width, height)) {
        throw ValidationError("soft mask length does not match its dimensions");
    }
    for (double v : data_) {
        if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("soft mask values must lie in [0, 1]");
    }
}

SoftMask SoftMask::from_binary(const BinaryMap& m) {
    std::vector<double> d(m.size());
    const auto bits = m.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = bits[i];
    return SoftMask(m.width(), m.height(), std::move(d));
}

SoftMask SoftMask::constant(int width, int height, double value) {
    return SoftMask(width, height, std::vector<double>(area(width, height), value));
}

}  // namespace lumikit
