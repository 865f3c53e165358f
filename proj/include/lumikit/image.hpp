#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lumikit {

/// Interleaved RGB image in linear sRGB. Values are finite and >= 0; values
/// above 1 are allowed until the image is encoded.
class LinearImage {
public:
    LinearImage(int width, int height);
    LinearImage(int width, int height, std::vector<double> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    double& at(int x, int y, int ch) noexcept { return data_[index(x, y, ch)]; }
    double at(int x, int y, int ch) const noexcept { return data_[index(x, y, ch)]; }

    /// Rec. 709 luminance plane, row-major.
    std::vector<double> luminance() const;

    friend bool operator==(const LinearImage&, const LinearImage&) = default;

private:
    std::size_t index(int x, int y, int ch) const noexcept {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(x)) * 3 + static_cast<std::size_t>(ch);
    }

    int width_;
    int height_;
    std::vector<double> data_;
};

/// Row-major single-channel {0,1} grid.
class BinaryMap {
public:
    BinaryMap(int width, int height);
    BinaryMap(int width, int height, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    std::span<const std::uint8_t> data() const noexcept { return data_; }
    bool at(int x, int y) const noexcept { return data_[offset(x, y)] != 0; }
    void set(int x, int y, bool v) noexcept { data_[offset(x, y)] = v ? 1 : 0; }

    std::size_t count() const noexcept;

    friend bool operator==(const BinaryMap&, const BinaryMap&) = default;

private:
    std::size_t offset(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

/// Concept mask. Soft inputs are binarized at 0.5.
class ForegroundMask : public BinaryMap {
public:
    using BinaryMap::BinaryMap;
    explicit ForegroundMask(BinaryMap m) : BinaryMap(std::move(m)) {}

    static ForegroundMask from_soft(int width, int height, std::span<const double> soft);
    static ForegroundMask full(int width, int height);
};

class EdgeMap : public BinaryMap {
public:
    using BinaryMap::BinaryMap;
    explicit EdgeMap(BinaryMap m) : BinaryMap(std::move(m)) {}
};

/// Row-major single-channel weights in [0, 1].
class SoftMask {
public:
    SoftMask(int width, int height, std::vector<double> data);
    static SoftMask from_binary(const BinaryMap& m);
    static SoftMask constant(int width, int height, double value);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::span<const double> data() const noexcept { return data_; }
    double at(int x, int y) const noexcept {
        return data_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                     static_cast<std::size_t>(x)];
    }

private:
    int width_;
    int height_;
    std::vector<double> data_;
};

}  // namespace lumikit
