#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <vector>

#include "lumikit/simd/kernels.hpp"

using namespace lumikit::simd;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

class SimdEquivalence : public ::testing::Test {
protected:
    void SetUp() override {
        simd_ = avx2_kernels();
        if (simd_ == nullptr) GTEST_SKIP() << "no SIMD variant on this CPU";
    }
    const KernelTable& ref_ = scalar_kernels();
    const KernelTable* simd_ = nullptr;
};

}  // namespace

TEST(SimdDispatch, ActiveTableIsComplete) {
    const auto& k = active_kernels();
    EXPECT_NE(k.scale_rgb, nullptr);
    EXPECT_NE(k.dot, nullptr);
    EXPECT_NE(k.convolve_cols, nullptr);
    EXPECT_EQ(scalar_kernels().isa, Isa::scalar);
}

TEST_F(SimdEquivalence, ScaleRgb) {
    const double gains[3] = {2.2391, 1.0, 0.2809};
    for (std::size_t pixels : {0u, 1u, 3u, 4u, 5u, 17u, 1000u}) {
        const auto in = random_values(pixels * 3, pixels);
        std::vector<double> a(in.size()), b(in.size());
        ref_.scale_rgb(in.data(), a.data(), pixels, gains);
        simd_->scale_rgb(in.data(), b.data(), pixels, gains);
        EXPECT_TRUE(bit_equal(a, b)) << pixels;
    }
}

TEST_F(SimdEquivalence, SquaredDiffAndGradient) {
    for (std::size_t n : {1u, 4u, 7u, 256u, 1023u}) {
        const auto p = random_values(n, 1 + n);
        const auto t = random_values(n, 2 + n);
        auto w = random_values(n, 3 + n);
        for (double& x : w) x = std::abs(x) / 2.0;
        std::vector<double> a(n), b(n);
        ref_.squared_diff(p.data(), t.data(), a.data(), n);
        simd_->squared_diff(p.data(), t.data(), b.data(), n);
        EXPECT_TRUE(bit_equal(a, b)) << n;
        ref_.weighted_gradient(p.data(), t.data(), w.data(), a.data(), n, static_cast<double>(n));
        simd_->weighted_gradient(p.data(), t.data(), w.data(), b.data(), n, static_cast<double>(n));
        EXPECT_TRUE(bit_equal(a, b)) << n;
    }
}

TEST_F(SimdEquivalence, Dot) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 9u, 256u, 4097u}) {
        const auto a = random_values(n, 10 + n);
        const auto b = random_values(n, 20 + n);
        const double r = ref_.dot(a.data(), b.data(), n);
        const double s = simd_->dot(a.data(), b.data(), n);
        EXPECT_EQ(std::memcmp(&r, &s, sizeof r), 0) << n;
    }
}

TEST_F(SimdEquivalence, Convolutions) {
    const double taps[] = {0.05, 0.1, 0.2, 0.3, 0.2, 0.1, 0.05};
    for (auto [w, h] : {std::pair{7, 7}, std::pair{13, 9}, std::pair{64, 33}, std::pair{5, 11}}) {
        const auto in = random_values(static_cast<std::size_t>(w) * h, static_cast<std::uint64_t>(w * h));
        std::vector<double> a(in.size()), b(in.size());
        ref_.convolve_rows(in.data(), a.data(), w, h, taps, 3);
        simd_->convolve_rows(in.data(), b.data(), w, h, taps, 3);
        EXPECT_TRUE(bit_equal(a, b)) << w << "x" << h;
        ref_.convolve_cols(in.data(), a.data(), w, h, taps, 3);
        simd_->convolve_cols(in.data(), b.data(), w, h, taps, 3);
        EXPECT_TRUE(bit_equal(a, b)) << w << "x" << h;
    }
}

TEST(ScalarKernels, DotReductionOrder) {
    // Lanes combine as (l0 + l1) + (l2 + l3), then the tail in order.
    const std::vector<double> a{1e16, 1.0, -1e16, 1.0, 0.5};
    const std::vector<double> b{1.0, 1.0, 1.0, 1.0, 1.0};
    const double expected = ((1e16 + 1.0) + (-1e16 + 1.0)) + 0.5;
    EXPECT_EQ(scalar_kernels().dot(a.data(), b.data(), a.size()), expected);
}
