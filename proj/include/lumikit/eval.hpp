#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lumikit/color.hpp"
#include "lumikit/image.hpp"
#include "lumikit/relight.hpp"

namespace lumikit {

// --- white balance --------------------------------------------------------------

struct WbMethod {
    enum class Kind { gray_world, shades_of_gray, white_patch, external };

    Kind kind = Kind::gray_world;
    double p = 6.0;  // Minkowski norm for shades_of_gray
    std::filesystem::path external_dir;

    static WbMethod gray_world() { return {}; }
    static WbMethod shades_of_gray(double p);
    static WbMethod white_patch() { return {Kind::white_patch, 6.0, {}}; }
    static WbMethod external(std::filesystem::path dir) { return {Kind::external, 6.0, std::move(dir)}; }

    /// "gray_world" | "sog:<p>" | "white_patch" | "external:<dir>"
    static WbMethod parse(std::string_view text);
    std::string to_string() const;
};

struct WhiteBalanceResult {
    LinearImage balanced;
    IlluminantRgb estimated_global;
};

/// Estimates a global illuminant with a classical statistic and divides it
/// out. For external mode `external_image` is the pre-balanced image produced
/// by an outside tool; its global gains are the ratio of channel means.
WhiteBalanceResult white_balance(const LinearImage& image, const WbMethod& method,
                                 const std::filesystem::path& external_image = {});

// --- illuminant estimation ----------------------------------------------------------

enum class RatioAggregation { median, mean };

inline constexpr double kRatioEpsilon = 1e-4;

/// Per-pixel ratio original / balanced over foreground pixels (channels with
/// balanced <= epsilon are excluded), aggregated per channel and normalized to
/// green == 1.
IlluminantRgb estimate_illuminant(const LinearImage& original, const LinearImage& balanced,
                                  const ForegroundMask& mask,
                                  RatioAggregation aggregation = RatioAggregation::median,
                                  double epsilon = kRatioEpsilon);

// --- SSIM ---------------------------------------------------------------------------

struct SsimOptions {
    /// Average of per-channel SSIM instead of SSIM on Rec. 709 luminance.
    bool per_channel = false;
};

inline constexpr int kSsimRadius = 5;  // 11x11 window
inline constexpr double kSsimSigma = 1.5;

/// Gaussian-window SSIM (K1 = 0.01, K2 = 0.03, dynamic range 1) averaged over
/// windows that lie fully inside the image. With a mask, only windows whose
/// centre is foreground are averaged.
double ssim(const LinearImage& a, const LinearImage& b, const ForegroundMask* mask = nullptr,
            const SsimOptions& options = {});
double ssim_plane(int width, int height, std::span<const double> a, std::span<const double> b,
                  const ForegroundMask* mask = nullptr);

// --- batch evaluation ------------------------------------------------------------------

struct MetricsRecord {
    std::string image_id;
    std::string preset_id;
    Vec3 estimated_illuminant{1.0, 1.0, 1.0};
    double angular_error_deg = 0.0;
    double lab_mse = 0.0;
    double ssim = 0.0;
    double clipped_ratio = 0.0;
};

struct RecordFailure {
    std::size_t index = 0;
    std::string image_id;
    std::string preset_id;
    std::string error;
};

struct MetricStats {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
};

struct AggregateRow {
    std::size_t count = 0;
    MetricStats angular_error_deg;
    MetricStats lab_mse;
    MetricStats ssim;
    MetricStats clipped_ratio;
};

struct MetricsReport {
    std::vector<MetricsRecord> records;
    std::vector<RecordFailure> failures;
    std::map<std::string, AggregateRow> per_preset;
    std::optional<AggregateRow> overall;
};

struct EvalOptions {
    RatioAggregation aggregation = RatioAggregation::median;
    bool masked_ssim = true;
    SsimOptions ssim;
    int threads = 1;
};

/// Recomputes per-preset and overall aggregates from `records`. The result
/// does not depend on record order.
void aggregate_report(MetricsReport& report);

MetricsReport evaluate_manifest(const AugmentationManifest& manifest, const WbMethod& method,
                                const EvalOptions& options = {});

nlohmann::ordered_json report_to_json(const MetricsReport& report);

}  // namespace lumikit
