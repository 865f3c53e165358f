#include <algorithm>
#include <array>
#include <cmath>

#include "lumikit/io.hpp"
#include "lumikit/plot.hpp"

namespace lumikit {

namespace {

using Rgb = std::array<std::uint16_t, 3>;

constexpr Rgb kPalette[] = {
    {31, 119, 180}, {255, 127, 14}, {44, 160, 44}, {214, 39, 40},
    {148, 103, 189}, {140, 86, 75}, {227, 119, 194}, {127, 127, 127},
};

class Canvas {
public:
    Canvas(int w, int h) : png_{w, h, 3, 8, std::vector<std::uint16_t>(static_cast<std::size_t>(w) * h * 3, 255)} {}

    void put(int x, int y, const Rgb& c) {
        if (x < 0 || y < 0 || x >= png_.width || y >= png_.height) return;
        const std::size_t i = (static_cast<std::size_t>(y) * png_.width + x) * 3;
        for (int k = 0; k < 3; ++k) png_.samples[i + k] = c[k];
    }

    void fill_rect(int x0, int y0, int x1, int y1, const Rgb& c) {
        for (int y = std::min(y0, y1); y <= std::max(y0, y1); ++y) {
            for (int x = std::min(x0, x1); x <= std::max(x0, x1); ++x) put(x, y, c);
        }
    }

    // Shape cycles through square, diamond, cross, triangle.
    void marker(int cx, int cy, int shape, const Rgb& c) {
        constexpr int r = 4;
        for (int dy = -r; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
                bool on = false;
                switch (shape % 4) {
                    case 0: on = true; break;
                    case 1: on = std::abs(dx) + std::abs(dy) <= r; break;
                    case 2: on = dx == 0 || dy == 0 || std::abs(dx) <= 1 || std::abs(dy) <= 1; break;
                    case 3: on = dy >= -r / 2 && std::abs(dx) <= (dy + r) / 2 + 1; break;
                }
                if (on) put(cx + dx, cy + dy, c);
            }
        }
    }

    const PngImage& image() const { return png_; }

private:
    PngImage png_;
};

}  // namespace

void write_scatter_plot(const std::filesystem::path& path, const std::vector<ScatterPoint>& points,
                        int width, int height) {
    Canvas canvas(width, height);
    const int margin = 24;
    double ext = 0.0;
    for (const auto& p : points) ext = std::max({ext, std::abs(p.x), std::abs(p.y)});
    if (!(ext > 0.0)) ext = 1.0;
    auto sx = [&](double x) {
        return static_cast<int>(std::lround(margin + (x / ext + 1.0) / 2.0 * (width - 2 * margin)));
    };
    auto sy = [&](double y) {
        return static_cast<int>(std::lround(height - margin - (y / ext + 1.0) / 2.0 * (height - 2 * margin)));
    };
    const Rgb axis{200, 200, 200};
    canvas.fill_rect(margin, sy(0.0), width - margin, sy(0.0), axis);
    canvas.fill_rect(sx(0.0), margin, sx(0.0), height - margin, axis);
    for (const auto& p : points) {
        const int s = std::max(0, p.series);
        canvas.marker(sx(p.x), sy(p.y), s, kPalette[s % 8]);
    }
    write_png(path, canvas.image());
}

void write_bar_chart(const std::filesystem::path& path, const std::vector<double>& values, int width,
                     int height) {
    Canvas canvas(width, height);
    const int margin = 20;
    double ext = 0.0;
    for (double v : values) ext = std::max(ext, std::abs(v));
    if (!(ext > 0.0)) ext = 1.0;
    const bool negative = std::any_of(values.begin(), values.end(), [](double v) { return v < 0.0; });
    const int base = negative ? height / 2 : height - margin;
    const int span = negative ? height / 2 - margin : height - 2 * margin;
    canvas.fill_rect(margin, base, width - margin, base, {0, 0, 0});
    if (values.empty()) {
        write_png(path, canvas.image());
        return;
    }
    const double slot = static_cast<double>(width - 2 * margin) / static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const int x0 = margin + static_cast<int>(std::lround(slot * i + slot * 0.15));
        const int x1 = margin + static_cast<int>(std::lround(slot * (i + 1) - slot * 0.15));
        const int h = static_cast<int>(std::lround(values[i] / ext * span));
        if (h != 0) canvas.fill_rect(x0, base, x1, base - h, kPalette[i % 8]);
    }
    write_png(path, canvas.image());
}

}  // namespace lumikit
