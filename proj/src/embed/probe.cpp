#include "lumikit/embed.hpp"
#include "lumikit/errors.hpp"
#include "lumikit/parallel.hpp"
#include "lumikit/plot.hpp"

namespace lumikit {

using ordered_json = nlohmann::ordered_json;

ProbeReport run_probe_suite(const std::vector<EmbeddingSet>& sets,
                            const std::vector<ClusterConfig>& configs, const ProbeOptions& options) {
    if (sets.empty()) throw ValidationError("probe suite needs at least one embedding set");
    if (configs.empty()) throw ValidationError("probe suite needs at least one cluster config");

    ProbeReport report;
    report.metric = options.metric;
    report.sets.resize(sets.size());
    for (std::size_t s = 0; s < sets.size(); ++s) {
        auto& r = report.sets[s];
        r.encoder_id = sets[s].encoder_id();
        r.level = sets[s].level();
        r.dim = sets[s].dim();
        for (const auto& item : sets[s].items()) {
            r.labels.push_back(item.label);
            r.categories.push_back(item.category);
        }
        r.silhouettes.resize(configs.size());
    }

    // One cell per (set, config) plus one PCA cell per set, all written to fixed slots.
    const std::size_t per_set = configs.size() + 1;
    parallel_for(sets.size() * per_set, options.threads, [&](std::size_t cell) {
        const std::size_t s = cell / per_set;
        const std::size_t c = cell % per_set;
        auto& r = report.sets[s];
        if (c == configs.size()) {
            try {
                r.pca = pca_project(sets[s], options.pca_dims);
            } catch (const Error& e) {
                r.pca_error = e.what();
            }
            return;
        }
        auto& out = r.silhouettes[c];
        out.config = configs[c].name;
        try {
            out.score = silhouette_score(sets[s], configs[c], options.metric);
        } catch (const Error& e) {
            out.error = e.what();
        }
    });

    if (options.plot_dir) {
        std::filesystem::create_directories(*options.plot_dir);
        for (const auto& r : report.sets) {
            if (!r.pca || r.pca->projections.cols() < 2) continue;
            std::vector<ScatterPoint> pts;
            for (Eigen::Index i = 0; i < r.pca->projections.rows(); ++i) {
                pts.push_back({r.pca->projections(i, 0), r.pca->projections(i, 1),
                               static_cast<int>(r.categories[static_cast<std::size_t>(i)])});
            }
            std::string name = r.encoder_id + "_" + std::string(to_string(r.level)) + "_pca.png";
            for (char& ch : name) {
                if (ch == '/' || ch == '\\' || ch == ' ') ch = '-';
            }
            write_scatter_plot(*options.plot_dir / name, pts);
        }
    }
    return report;
}

ordered_json probe_report_to_json(const ProbeReport& report) {
    ordered_json j;
    j["metric"] = to_string(report.metric);
    ordered_json sets = ordered_json::array();
    for (const auto& r : report.sets) {
        ordered_json s;
        s["encoder_id"] = r.encoder_id;
        s["level"] = to_string(r.level);
        s["dim"] = r.dim;
        s["count"] = r.labels.size();
        if (r.pca) {
            ordered_json pca;
            pca["explained_variance_ratio"] = r.pca->explained_variance_ratio;
            pca["eigenvalues"] = r.pca->eigenvalues;
            ordered_json proj = ordered_json::array();
            for (std::size_t i = 0; i < r.labels.size(); ++i) {
                ordered_json p;
                p["label"] = r.labels[i];
                p["category"] = to_string(r.categories[i]);
                std::vector<double> coords;
                for (Eigen::Index k = 0; k < r.pca->projections.cols(); ++k) {
                    coords.push_back(r.pca->projections(static_cast<Eigen::Index>(i), k));
                }
                p["coords"] = coords;
                proj.push_back(std::move(p));
            }
            pca["projections"] = std::move(proj);
            s["pca"] = std::move(pca);
        } else {
            s["pca"] = nullptr;
            s["pca_error"] = r.pca_error;
        }
        ordered_json sil = ordered_json::array();
        for (const auto& cell : r.silhouettes) {
            ordered_json c;
            c["config"] = cell.config;
            c["metric"] = to_string(report.metric);
            if (cell.score) {
                c["score"] = *cell.score;
            } else {
                c["score"] = nullptr;
                c["error"] = cell.error;
            }
            sil.push_back(std::move(c));
        }
        s["silhouettes"] = std::move(sil);
        sets.push_back(std::move(s));
    }
    j["sets"] = std::move(sets);
    return j;
}

}  // namespace lumikit
