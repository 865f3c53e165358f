#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lumikit/image.hpp"

namespace lumikit {

/// Raw PNG samples, row-major and channel-interleaved. Channels are 1 (gray),
/// 2 (gray+alpha), 3 (RGB) or 4 (RGBA); bit depth 8 or 16.
struct PngImage {
    int width = 0;
    int height = 0;
    int channels = 0;
    int bit_depth = 8;
    std::vector<std::uint16_t> samples;

    double max_value() const noexcept { return bit_depth == 16 ? 65535.0 : 255.0; }
};

PngImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const PngImage& image);

/// Reads an sRGB-encoded PNG and decodes it to linear sRGB. Gray inputs are
/// replicated across channels; alpha is dropped.
LinearImage load_linear_image(const std::filesystem::path& path);

/// sRGB-encodes and quantizes. Values outside [0, 1] are clamped; the number of
/// pixels with at least one clamped channel is added to `clipped_pixels`.
PngImage encode_srgb(const LinearImage& image, int bit_depth, std::size_t* clipped_pixels = nullptr);
void save_linear_image(const std::filesystem::path& path, const LinearImage& image,
                       int bit_depth = 8, std::size_t* clipped_pixels = nullptr);

/// Loads a mask PNG (first channel), binarizing at half of full scale.
ForegroundMask load_mask(const std::filesystem::path& path);
/// Writes an 8-bit single-channel PNG with values {0, 255}.
void save_binary_png(const std::filesystem::path& path, const BinaryMap& map);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, const std::string& text);

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace lumikit
