#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>

#include "lumikit/color.hpp"
#include "lumikit/errors.hpp"
#include "lumikit/io.hpp"

namespace lumikit {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw IoError("cannot open '" + path.string() + "'");
    return f;
}

void on_png_error(png_structp png, png_const_charp msg) {
    auto* text = static_cast<std::string*>(png_get_error_ptr(png));
    if (text) *text = msg;
    png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

int color_type_for(int channels) {
    switch (channels) {
        case 1: return PNG_COLOR_TYPE_GRAY;
        case 2: return PNG_COLOR_TYPE_GRAY_ALPHA;
        case 3: return PNG_COLOR_TYPE_RGB;
        case 4: return PNG_COLOR_TYPE_RGB_ALPHA;
        default: throw ValidationError("unsupported PNG channel count " + std::to_string(channels));
    }
}

}  // namespace

PngImage read_png(const std::filesystem::path& path) {
    FilePtr file = open_file(path, "rb");
    std::string message;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, on_png_error,
                                             on_png_warning);
    if (!png) throw IoError("libpng initialization failed");
    png_infop info = png_create_info_struct(png);
    PngImage out;
    std::vector<png_bytep> rows;
    std::vector<png_byte> buffer;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("cannot decode PNG '" + path.string() + "': " + message);
    }
    png_init_io(png, file.get());
    png_read_info(png, info);

    const int color_type = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (depth == 16) png_set_swap(png);
    png_read_update_info(png, info);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.channels = png_get_channels(png, info);
    out.bit_depth = png_get_bit_depth(png, info);
    const std::size_t row_bytes = png_get_rowbytes(png, info);
    buffer.resize(row_bytes * static_cast<std::size_t>(out.height));
    rows.resize(static_cast<std::size_t>(out.height));
    for (int y = 0; y < out.height; ++y) rows[y] = buffer.data() + row_bytes * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    const std::size_t count =
        static_cast<std::size_t>(out.width) * out.height * static_cast<std::size_t>(out.channels);
    out.samples.resize(count);
    if (out.bit_depth == 16) {
        for (std::size_t i = 0; i < count; ++i) {
            out.samples[i] = static_cast<std::uint16_t>(buffer[2 * i] | (buffer[2 * i + 1] << 8));
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) out.samples[i] = buffer[i];
    }
    return out;
}

void write_png(const std::filesystem::path& path, const PngImage& image) {
    if (image.bit_depth != 8 && image.bit_depth != 16) {
        throw ValidationError("PNG bit depth must be 8 or 16");
    }
    const int color_type = color_type_for(image.channels);
    const std::size_t per_row = static_cast<std::size_t>(image.width) * image.channels;
    if (image.samples.size() != per_row * static_cast<std::size_t>(image.height)) {
        throw ValidationError("PNG sample count does not match its dimensions");
    }
    const std::size_t bytes_per_sample = image.bit_depth == 16 ? 2 : 1;
    std::vector<png_byte> buffer(per_row * bytes_per_sample * image.height);
    for (std::size_t i = 0; i < image.samples.size(); ++i) {
        if (bytes_per_sample == 2) {
            buffer[2 * i] = static_cast<png_byte>(image.samples[i] >> 8);
            buffer[2 * i + 1] = static_cast<png_byte>(image.samples[i] & 0xff);
        } else {
            buffer[i] = static_cast<png_byte>(image.samples[i]);
        }
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(image.height));
    for (int y = 0; y < image.height; ++y) {
        rows[y] = buffer.data() + per_row * bytes_per_sample * y;
    }

    FilePtr file = open_file(path, "wb");
    std::string message;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, on_png_error,
                                              on_png_warning);
    if (!png) throw IoError("libpng initialization failed");
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("cannot write PNG '" + path.string() + "': " + message);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
                 static_cast<png_uint_32>(image.height), image.bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    if (image.channels >= 3) png_set_sRGB(png, info, PNG_sRGB_INTENT_PERCEPTUAL);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    if (std::fflush(file.get()) != 0) throw IoError("cannot flush '" + path.string() + "'");
}

LinearImage load_linear_image(const std::filesystem::path& path) {
    const PngImage png = read_png(path);
    const double scale = png.max_value();
    // Decode through a lookup table; every sample value maps to one linear value.
    std::vector<double> lut(static_cast<std::size_t>(scale) + 1);
    for (std::size_t v = 0; v < lut.size(); ++v) lut[v] = srgb_decode(static_cast<double>(v) / scale);

    std::vector<double> data(static_cast<std::size_t>(png.width) * png.height * 3);
    const bool color = png.channels >= 3;
    for (std::size_t p = 0; p < data.size() / 3; ++p) {
        const std::uint16_t* px = png.samples.data() + p * static_cast<std::size_t>(png.channels);
        for (int c = 0; c < 3; ++c) data[3 * p + c] = lut[color ? px[c] : px[0]];
    }
    return LinearImage(png.width, png.height, std::move(data));
}

PngImage encode_srgb(const LinearImage& image, int bit_depth, std::size_t* clipped_pixels) {
    if (bit_depth != 8 && bit_depth != 16) throw ValidationError("bit depth must be 8 or 16");
    PngImage png;
    png.width = image.width();
    png.height = image.height();
    png.channels = 3;
    png.bit_depth = bit_depth;
    const double scale = png.max_value();
    const auto src = image.data();
    png.samples.resize(src.size());
    std::size_t clipped = 0;
    for (std::size_t p = 0; p < image.pixel_count(); ++p) {
        std::size_t clamped = 0;
        for (int c = 0; c < 3; ++c) {
            const double enc = srgb_encode(src[3 * p + c], &clamped);
            png.samples[3 * p + c] = static_cast<std::uint16_t>(std::lround(enc * scale));
        }
        if (clamped > 0) ++clipped;
    }
    if (clipped_pixels) *clipped_pixels += clipped;
    return png;
}

void save_linear_image(const std::filesystem::path& path, const LinearImage& image, int bit_depth,
                       std::size_t* clipped_pixels) {
    write_png(path, encode_srgb(image, bit_depth, clipped_pixels));
}

ForegroundMask load_mask(const std::filesystem::path& path) {
    const PngImage png = read_png(path);
    const double half = png.max_value() / 2.0;
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(png.width) * png.height);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        bits[i] = png.samples[i * static_cast<std::size_t>(png.channels)] >= half ? 1 : 0;
    }
    return ForegroundMask(png.width, png.height, std::move(bits));
}

void save_binary_png(const std::filesystem::path& path, const BinaryMap& map) {
    PngImage png;
    png.width = map.width();
    png.height = map.height();
    png.channels = 1;
    png.bit_depth = 8;
    png.samples.resize(map.size());
    const auto bits = map.data();
    for (std::size_t i = 0; i < bits.size(); ++i) png.samples[i] = bits[i] ? 255 : 0;
    write_png(path, png);
}

}  // namespace lumikit
