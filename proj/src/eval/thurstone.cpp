#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "lumikit/errors.hpp"
#include "lumikit/study.hpp"

namespace lumikit {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(trim(field));
    return out;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> scales_from_proportions(const std::vector<std::vector<double>>& z) {
    const std::size_t n = z.size();
    std::vector<double> scale(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += z[i][j];
        scale[i] = sum / static_cast<double>(n);
    }
    const double lo = *std::min_element(scale.begin(), scale.end());
    for (double& s : scale) s -= lo;
    return scale;
}

std::vector<std::vector<double>> z_matrix(const PreferenceMatrix& prefs,
                                          const std::vector<std::vector<std::int64_t>>* resampled) {
    const std::size_t n = prefs.size();
    std::vector<std::vector<double>> z(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double trials = static_cast<double>(prefs.trials(i, j));
            const double wins =
                static_cast<double>(resampled ? (*resampled)[i][j] : prefs.wins(i, j));
            const double floor = 1.0 / (2.0 * trials);
            const double p = std::clamp(wins / trials, floor, 1.0 - floor);
            z[i][j] = inverse_normal_cdf(p);
        }
    }
    return z;
}

double percentile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

}  // namespace

PreferenceMatrix::PreferenceMatrix(std::vector<std::string> names,
                                   std::vector<std::vector<std::int64_t>> wins)
    : names_(std::move(names)), wins_(std::move(wins)) {
    const std::size_t n = names_.size();
    if (wins_.size() != n) throw ValidationError("preference matrix must be square");
    for (std::size_t i = 0; i < n; ++i) {
        if (wins_[i].size() != n) throw ValidationError("preference matrix must be square");
        if (wins_[i][i] != 0) throw ValidationError("preference matrix diagonal must be zero");
        for (std::size_t j = 0; j < n; ++j) {
            if (wins_[i][j] < 0) throw ValidationError("preference counts must be nonnegative");
        }
    }
}

PreferenceMatrix PreferenceMatrix::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<std::string> names;
    std::vector<std::tuple<std::size_t, std::size_t, std::int64_t>> rows;
    auto index_of = [&](const std::string& name) {
        const auto it = std::find(names.begin(), names.end(), name);
        if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
        names.push_back(name);
        return names.size() - 1;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line);
        if (!header_seen) {
            if (fields != std::vector<std::string>{"winner", "loser", "count"}) {
                throw ValidationError("preference CSV header must be 'winner,loser,count'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
            throw ValidationError("preference CSV line " + std::to_string(line_no) +
                                  ": expected winner,loser,count");
        }
        if (fields[0] == fields[1]) {
            throw ValidationError("preference CSV line " + std::to_string(line_no) +
                                  ": winner and loser are the same method");
        }
        std::int64_t count = 0;
        try {
            std::size_t used = 0;
            count = std::stoll(fields[2], &used);
            if (used != fields[2].size() || count < 0) throw std::invalid_argument("count");
        } catch (const std::exception&) {
            throw ValidationError("preference CSV line " + std::to_string(line_no) +
                                  ": invalid count '" + fields[2] + "'");
        }
        const std::size_t w = index_of(fields[0]);
        const std::size_t l = index_of(fields[1]);
        rows.emplace_back(w, l, count);
    }
    if (!header_seen) throw ValidationError("preference CSV is empty");
    std::vector<std::vector<std::int64_t>> wins(names.size(),
                                                std::vector<std::int64_t>(names.size(), 0));
    for (const auto& [w, l, c] : rows) wins[w][l] += c;
    return PreferenceMatrix(std::move(names), std::move(wins));
}

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("inverse normal CDF needs p in (0, 1)");
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley step.
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

CaseVScales thurstone_case_v(const PreferenceMatrix& prefs) {
    const std::size_t n = prefs.size();
    if (n < 2) throw ValidationError("Thurstone scaling needs at least two methods");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (prefs.trials(i, j) <= 0) {
                throw ValidationError("no trials between '" + prefs.names()[i] + "' and '" +
                                      prefs.names()[j] + "'");
            }
        }
    }
    CaseVScales out;
    out.names = prefs.names();
    out.z = z_matrix(prefs, nullptr);
    out.scale = scales_from_proportions(out.z);
    return out;
}

ScaleInterval bootstrap_case_v(const PreferenceMatrix& prefs, std::size_t resamples,
                               std::uint64_t seed, double level) {
    thurstone_case_v(prefs);  // validates
    if (resamples == 0) throw ValidationError("bootstrap needs at least one resample");
    if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
    const std::size_t n = prefs.size();
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> samples(n);
    std::vector<std::vector<std::int64_t>> wins(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t r = 0; r < resamples; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const std::int64_t trials = prefs.trials(i, j);
                const double p = static_cast<double>(prefs.wins(i, j)) / static_cast<double>(trials);
                std::int64_t k = 0;
                for (std::int64_t t = 0; t < trials; ++t) k += uniform01(rng) < p ? 1 : 0;
                wins[i][j] = k;
                wins[j][i] = trials - k;
            }
        }
        const auto scale = scales_from_proportions(z_matrix(prefs, &wins));
        for (std::size_t i = 0; i < n; ++i) samples[i].push_back(scale[i]);
    }
    ScaleInterval out;
    out.names = prefs.names();
    out.resamples = resamples;
    out.seed = seed;
    out.level = level;
    const double tail = (1.0 - level) / 2.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.lower.push_back(percentile(samples[i], tail));
        out.upper.push_back(percentile(samples[i], 1.0 - tail));
    }
    return out;
}

}  // namespace lumikit
