#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "lumikit/image.hpp"

namespace lumikit::testing {

inline std::filesystem::path test_data(const std::string& rel) {
    return std::filesystem::path(LUMIKIT_TEST_DATA_DIR) / rel;
}

inline std::filesystem::path repo_data(const std::string& rel) {
    return std::filesystem::path(LUMIKIT_DATA_DIR) / rel;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("lumikit_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

inline LinearImage random_image(int w, int h, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    LinearImage img(w, h);
    for (double& v : img.data()) v = u(rng);
    return img;
}

inline LinearImage gray_image(int w, int h, double v) {
    LinearImage img(w, h);
    for (double& x : img.data()) x = v;
    return img;
}

/// Left half `a`, right half `b`, equal across channels.
inline LinearImage step_image(int w, int h, double a, double b) {
    LinearImage img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = x < w / 2 ? a : b;
        }
    }
    return img;
}

}  // namespace lumikit::testing
