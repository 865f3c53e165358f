#include <algorithm>
#include <cmath>

#include "lumikit/errors.hpp"
#include "lumikit/eval.hpp"
#include "lumikit/io.hpp"
#include "lumikit/parallel.hpp"

namespace lumikit {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Sorting first makes the sums independent of record order.
MetricStats stats_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    MetricStats s;
    s.mean = sum / static_cast<double>(values.size());
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - s.mean;
        dev[i] = d * d;
    }
    std::sort(dev.begin(), dev.end());
    double ss = 0.0;
    for (double d : dev) ss += d;
    s.std = std::sqrt(ss / static_cast<double>(values.size()));
    return s;
}

AggregateRow row_of(const std::vector<const MetricsRecord*>& recs) {
    std::vector<double> ae, mse, ss, clip;
    for (const auto* r : recs) {
        ae.push_back(r->angular_error_deg);
        mse.push_back(r->lab_mse);
        ss.push_back(r->ssim);
        clip.push_back(r->clipped_ratio);
    }
    AggregateRow row;
    row.count = recs.size();
    row.angular_error_deg = stats_of(std::move(ae));
    row.lab_mse = stats_of(std::move(mse));
    row.ssim = stats_of(std::move(ss));
    row.clipped_ratio = stats_of(std::move(clip));
    return row;
}

ordered_json stats_json(const MetricStats& s) {
    ordered_json j;
    j["mean"] = s.mean;
    j["std"] = s.std;
    return j;
}

ordered_json row_json(const AggregateRow& row) {
    ordered_json j;
    j["count"] = row.count;
    j["angular_error_deg"] = stats_json(row.angular_error_deg);
    j["lab_mse"] = stats_json(row.lab_mse);
    j["ssim"] = stats_json(row.ssim);
    j["clipped_ratio"] = stats_json(row.clipped_ratio);
    return j;
}

MetricsRecord evaluate_record(const ManifestRecord& rec, const fs::path& base, const WbMethod& method,
                              const EvalOptions& options) {
    const fs::path image_path = base / rec.variant_image_path;
    const LinearImage original = load_linear_image(image_path);
    const ForegroundMask mask = load_mask(base / rec.mask_path);
    if (mask.width() != original.width() || mask.height() != original.height()) {
        throw ValidationError("mask '" + rec.mask_path + "' differs in size from '" +
                              rec.variant_image_path + "'");
    }

    fs::path external;
    if (method.kind == WbMethod::Kind::external) {
        external = method.external_dir / fs::path(rec.variant_image_path).filename();
    }
    const WhiteBalanceResult wb = white_balance(original, method, external);
    const IlluminantRgb estimate =
        estimate_illuminant(original, wb.balanced, mask, options.aggregation);
    const Vec3& truth = preset_to_illuminant_rgb(require_preset_id(rec.preset_id)).gains();

    MetricsRecord out;
    out.image_id = rec.variant_image_path;
    out.preset_id = rec.preset_id;
    out.estimated_illuminant = estimate.gains();
    out.angular_error_deg = angular_error(estimate.gains(), truth);
    out.lab_mse = lab_mse(estimate.gains(), truth);
    out.ssim = ssim(original, wb.balanced, options.masked_ssim ? &mask : nullptr, options.ssim);

    std::size_t clipped = 0;
    const auto px = original.data();
    const auto m = mask.data();
    for (std::size_t p = 0; p < m.size(); ++p) {
        if (m[p] && (px[3 * p] >= 1.0 || px[3 * p + 1] >= 1.0 || px[3 * p + 2] >= 1.0)) ++clipped;
    }
    out.clipped_ratio = static_cast<double>(clipped) / static_cast<double>(mask.count());
    return out;
}

}  // namespace

void aggregate_report(MetricsReport& report) {
    report.per_preset.clear();
    report.overall.reset();
    if (report.records.empty()) return;
    std::map<std::string, std::vector<const MetricsRecord*>> groups;
    std::vector<const MetricsRecord*> all;
    for (const auto& r : report.records) {
        groups[r.preset_id].push_back(&r);
        all.push_back(&r);
    }
    for (const auto& [id, recs] : groups) report.per_preset[id] = row_of(recs);
    report.overall = row_of(all);
}

MetricsReport evaluate_manifest(const AugmentationManifest& manifest, const WbMethod& method,
                                const EvalOptions& options) {
    const std::size_t n = manifest.records.size();
    std::vector<std::optional<MetricsRecord>> results(n);
    std::vector<std::string> errors(n);
    parallel_for(n, options.threads, [&](std::size_t i) {
        try {
            results[i] = evaluate_record(manifest.records[i], manifest.base_dir, method, options);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });

    MetricsReport report;
    for (std::size_t i = 0; i < n; ++i) {
        if (results[i]) {
            report.records.push_back(std::move(*results[i]));
        } else {
            report.failures.push_back({i, manifest.records[i].variant_image_path,
                                       manifest.records[i].preset_id, errors[i]});
        }
    }
    aggregate_report(report);
    return report;
}

ordered_json report_to_json(const MetricsReport& report) {
    ordered_json j;
    j["record_count"] = report.records.size();
    j["excluded_count"] = report.failures.size();
    ordered_json records = ordered_json::array();
    for (const auto& r : report.records) {
        ordered_json o;
        o["image_id"] = r.image_id;
        o["preset_id"] = r.preset_id;
        o["estimated_illuminant"] = {r.estimated_illuminant[0], r.estimated_illuminant[1],
                                     r.estimated_illuminant[2]};
        o["angular_error_deg"] = r.angular_error_deg;
        o["lab_mse"] = r.lab_mse;
        o["ssim"] = r.ssim;
        o["clipped_ratio"] = r.clipped_ratio;
        records.push_back(std::move(o));
    }
    j["records"] = std::move(records);
    ordered_json failures = ordered_json::array();
    for (const auto& f : report.failures) {
        ordered_json o;
        o["index"] = f.index;
        o["image_id"] = f.image_id;
        o["preset_id"] = f.preset_id;
        o["error"] = f.error;
        failures.push_back(std::move(o));
    }
    j["failures"] = std::move(failures);
    ordered_json aggregates;
    ordered_json per_preset = ordered_json::object();
    for (const auto& [id, row] : report.per_preset) per_preset[id] = row_json(row);
    aggregates["per_preset"] = std::move(per_preset);
    aggregates["overall"] = report.overall ? row_json(*report.overall) : ordered_json(nullptr);
    j["aggregates"] = std::move(aggregates);
    return j;
}

}  // namespace lumikit
