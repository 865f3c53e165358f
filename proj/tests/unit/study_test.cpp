#include <gtest/gtest.h>

#include <cmath>

#include "lumikit/errors.hpp"
#include "lumikit/study.hpp"

using namespace lumikit;

namespace {

PreferenceMatrix two_methods(std::int64_t a_wins, std::int64_t b_wins) {
    return PreferenceMatrix({"A", "B"}, {{0, a_wins}, {b_wins, 0}});
}

}  // namespace

TEST(InverseNormal, KnownValues) {
    EXPECT_EQ(inverse_normal_cdf(0.5), 0.0);
    EXPECT_NEAR(inverse_normal_cdf(0.8413447460685429), 1.0, 1e-12);
    EXPECT_NEAR(inverse_normal_cdf(0.022750131948179195), -2.0, 1e-12);
    EXPECT_NEAR(inverse_normal_cdf(0.975), 1.959963984540054, 1e-12);
    EXPECT_THROW(inverse_normal_cdf(0.0), DomainError);
    EXPECT_THROW(inverse_normal_cdf(1.0), DomainError);
}

TEST(InverseNormal, RoundTripGrid) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double p = 0.001 + (0.998 * i) / 999.0;
        worst = std::max(worst, std::abs(normal_cdf(inverse_normal_cdf(p)) - p));
    }
    EXPECT_LT(worst, 1e-8);
}

TEST(InverseNormal, Tails) {
    for (double p : {1e-10, 1e-6, 0.02, 0.98, 1.0 - 1e-6}) {
        EXPECT_NEAR(normal_cdf(inverse_normal_cdf(p)) / p, 1.0, 1e-8) << p;
    }
}

TEST(Thurstone, EvenSplit) {
    const auto s = thurstone_case_v(two_methods(50, 50));
    EXPECT_NEAR(s.scale[0] - s.scale[1], 0.0, 1e-12);
}

TEST(Thurstone, OneSigma) {
    const auto s = thurstone_case_v(two_methods(8413, 1587));
    // Row means are +/- z/2, so the scale difference equals z.
    EXPECT_NEAR(s.scale[0] - s.scale[1], 1.0, 1e-3);
    EXPECT_EQ(std::min(s.scale[0], s.scale[1]), 0.0);
}

TEST(Thurstone, ThreeMethodTransitive) {
    PreferenceMatrix m({"A", "B", "C"}, {{0, 8413, 9772}, {1587, 0, 8413}, {228, 1587, 0}});
    const auto s = thurstone_case_v(m);
    // Row means over n = 3 give (1, 0, -1) before the shift: differences of one z-unit.
    EXPECT_NEAR(s.scale[0] - s.scale[2], 2.0, 0.01);
    EXPECT_NEAR(s.scale[1] - s.scale[2], 1.0, 0.01);
    EXPECT_EQ(s.scale[2], 0.0);
}

TEST(Thurstone, ClippingKeepsUnanimousPairsFinite) {
    const auto s = thurstone_case_v(two_methods(20, 0));
    EXPECT_TRUE(std::isfinite(s.scale[0]));
    // p clipped to 1 - 1/(2N) = 0.975
    EXPECT_NEAR(s.z[0][1], inverse_normal_cdf(0.975), 1e-12);
    EXPECT_GT(s.scale[0], s.scale[1]);
}

TEST(Thurstone, Errors) {
    EXPECT_THROW(thurstone_case_v(PreferenceMatrix({"A"}, {{0}})), ValidationError);
    EXPECT_THROW(thurstone_case_v(two_methods(0, 0)), ValidationError);
    EXPECT_THROW(PreferenceMatrix({"A", "B"}, {{1, 2}, {3, 0}}), ValidationError);
    EXPECT_THROW(PreferenceMatrix({"A", "B"}, {{0, -1}, {3, 0}}), ValidationError);
}

TEST(PreferenceCsv, Parse) {
    const auto m = PreferenceMatrix::from_csv("winner,loser,count\nours,base,30\nbase,ours,10\nours,base,5\nbase,other,7\nother,base,3\nours,other,9\nother,ours,1\n");
    ASSERT_EQ(m.size(), 3u);
    EXPECT_EQ(m.names()[0], "ours");
    EXPECT_EQ(m.wins(0, 1), 35);
    EXPECT_EQ(m.trials(0, 1), 45);
    EXPECT_THROW(PreferenceMatrix::from_csv("a,b,c\nx,y,1\n"), ValidationError);
    EXPECT_THROW(PreferenceMatrix::from_csv("winner,loser,count\nx,y,abc\n"), ValidationError);
    EXPECT_THROW(PreferenceMatrix::from_csv("winner,loser,count\nx,x,3\n"), ValidationError);
}

TEST(Bootstrap, DeterministicAndBracketsEstimate) {
    PreferenceMatrix m({"A", "B", "C"}, {{0, 70, 80}, {30, 0, 60}, {20, 40, 0}});
    const auto a = bootstrap_case_v(m, 1000, 42);
    const auto b = bootstrap_case_v(m, 1000, 42);
    EXPECT_EQ(a.lower, b.lower);
    EXPECT_EQ(a.upper, b.upper);
    const auto c = bootstrap_case_v(m, 1000, 7);
    EXPECT_NE(a.upper, c.upper);
    const auto s = thurstone_case_v(m);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_LE(a.lower[i], s.scale[i] + 1e-12);
        EXPECT_GE(a.upper[i], s.scale[i] - 1e-12);
    }
    EXPECT_EQ(a.resamples, 1000u);
    EXPECT_EQ(a.seed, 42u);
}
