#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lumikit {

/// Pairwise 2AFC outcomes. wins(i, j) counts trials in which method i was
/// preferred over method j.
class PreferenceMatrix {
public:
    PreferenceMatrix(std::vector<std::string> names, std::vector<std::vector<std::int64_t>> wins);

    /// CSV with header `winner,loser,count`; rows for the same pair accumulate.
    /// Methods are indexed in order of first appearance.
    static PreferenceMatrix from_csv(const std::string& text);

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    std::int64_t wins(std::size_t i, std::size_t j) const { return wins_[i][j]; }
    std::int64_t trials(std::size_t i, std::size_t j) const { return wins_[i][j] + wins_[j][i]; }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<std::int64_t>> wins_;
};

double normal_cdf(double z) noexcept;

/// Inverse standard normal CDF. Acklam's rational approximation (relative
/// error 1.15e-9) refined by one Halley step against erfc. Throws DomainError
/// outside (0, 1).
double inverse_normal_cdf(double p);

struct CaseVScales {
    std::vector<std::string> names;
    /// z[i][j] = inverse_normal_cdf(p_ij), p_ij clipped to [1/2N, 1 - 1/2N].
    std::vector<std::vector<double>> z;
    /// Row means of z, shifted so the minimum is 0.
    std::vector<double> scale;
};

CaseVScales thurstone_case_v(const PreferenceMatrix& prefs);

struct ScaleInterval {
    std::vector<std::string> names;
    std::vector<double> lower;
    std::vector<double> upper;
    std::size_t resamples = 0;
    std::uint64_t seed = 0;
    double level = 0.95;
};

/// Percentile bootstrap over binomially resampled pair outcomes. An
/// approximation of scale uncertainty, not a published CI method.
ScaleInterval bootstrap_case_v(const PreferenceMatrix& prefs, std::size_t resamples = 1000,
                               std::uint64_t seed = 42, double level = 0.95);

}  // namespace lumikit
