#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lumikit {

struct ScatterPoint {
    double x = 0.0;
    double y = 0.0;
    int series = 0;  // selects marker colour and shape
};

/// Static PNG scatter plot with per-series markers, axes through the origin.
void write_scatter_plot(const std::filesystem::path& path, const std::vector<ScatterPoint>& points,
                        int width = 480, int height = 480);

/// Static PNG bar chart, one bar per value, bars scaled to the largest
/// magnitude.
void write_bar_chart(const std::filesystem::path& path, const std::vector<double>& values,
                     int width = 480, int height = 320);

}  // namespace lumikit
