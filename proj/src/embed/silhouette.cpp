#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "lumikit/embed.hpp"
#include "lumikit/errors.hpp"

namespace lumikit {

std::string_view to_string(DistanceMetric metric) noexcept {
    return metric == DistanceMetric::cosine ? "cosine" : "euclidean";
}

std::optional<DistanceMetric> parse_metric(std::string_view text) noexcept {
    if (text == "cosine") return DistanceMetric::cosine;
    if (text == "euclidean") return DistanceMetric::euclidean;
    return std::nullopt;
}

std::vector<ClusterConfig> parse_cluster_configs(const std::string& json_text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("cluster config: ") + e.what());
    }
    std::vector<ClusterConfig> configs;
    try {
        for (const auto& c : j.at("configs")) {
            ClusterConfig cfg;
            cfg.name = c.at("name").get<std::string>();
            for (const auto& [group, members] : c.at("groups").items()) {
                cfg.groups.emplace_back(group, members.get<std::vector<std::string>>());
            }
            if (cfg.groups.size() < 2) {
                throw ValidationError("cluster config '" + cfg.name + "' needs at least two groups");
            }
            configs.push_back(std::move(cfg));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("cluster config: ") + e.what());
    }
    if (configs.empty()) throw ValidationError("cluster config file lists no configs");
    return configs;
}

std::vector<int> resolve_groups(const EmbeddingSet& set, const ClusterConfig& config) {
    if (config.groups.size() < 2) {
        throw ValidationError("cluster config '" + config.name + "' needs at least two groups");
    }
    std::vector<int> assign(set.size(), -1);
    for (std::size_t g = 0; g < config.groups.size(); ++g) {
        const auto& [group, members] = config.groups[g];
        std::size_t added = 0;
        auto assign_item = [&](std::size_t i) {
            if (assign[i] != -1 && assign[i] != static_cast<int>(g)) {
                throw ValidationError("cluster config '" + config.name + "': item '" +
                                      set.items()[i].label + "' belongs to two groups");
            }
            if (assign[i] == -1) ++added;
            assign[i] = static_cast<int>(g);
        };
        for (const auto& m : members) {
            if (m.starts_with("@")) {
                const auto cat = parse_category(std::string_view(m).substr(1));
                if (!cat) {
                    throw ValidationError("cluster config '" + config.name + "': unknown category '" + m + "'");
                }
                for (std::size_t i = 0; i < set.size(); ++i) {
                    if (set.items()[i].category == *cat) assign_item(i);
                }
            } else {
                const auto idx = set.find(m);
                if (!idx) {
                    throw ValidationError("cluster config '" + config.name + "': item '" + m +
                                          "' not found in embedding set '" + set.encoder_id() + "'");
                }
                assign_item(*idx);
            }
        }
        if (added == 0) {
            throw ValidationError("cluster config '" + config.name + "': group '" + group +
                                  "' has no members in '" + set.encoder_id() + "'");
        }
    }
    return assign;
}

namespace {

double distance(const Eigen::MatrixXd& p, Eigen::Index i, Eigen::Index j, DistanceMetric metric,
                const std::vector<double>& norms) {
    if (metric == DistanceMetric::euclidean) {
        double s = 0.0;
        for (Eigen::Index d = 0; d < p.cols(); ++d) {
            const double diff = p(i, d) - p(j, d);
            s += diff * diff;
        }
        return std::sqrt(s);
    }
    double dot = 0.0;
    for (Eigen::Index d = 0; d < p.cols(); ++d) dot += p(i, d) * p(j, d);
    return 1.0 - dot / (norms[i] * norms[j]);
}

}  // namespace

double silhouette_score(const Eigen::MatrixXd& points, const std::vector<int>& groups,
                        DistanceMetric metric) {
    const Eigen::Index n = points.rows();
    if (static_cast<std::size_t>(n) != groups.size()) {
        throw ValidationError("silhouette: group assignment length differs from point count");
    }
    int group_count = 0;
    for (int g : groups) group_count = std::max(group_count, g + 1);
    std::vector<std::size_t> sizes(static_cast<std::size_t>(group_count), 0);
    for (int g : groups) {
        if (g >= 0) ++sizes[g];
    }
    std::size_t nonempty = 0;
    for (auto s : sizes) nonempty += s > 0;
    if (nonempty < 2) throw ValidationError("silhouette needs at least two non-empty groups");

    std::vector<double> norms(static_cast<std::size_t>(n), 0.0);
    if (metric == DistanceMetric::cosine) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double s = 0.0;
            for (Eigen::Index d = 0; d < points.cols(); ++d) s += points(i, d) * points(i, d);
            norms[i] = std::sqrt(s);
            if (groups[i] >= 0 && !(norms[i] > 0.0)) {
                throw DegenerateError("cosine distance undefined for a zero vector");
            }
        }
    }

    double total = 0.0;
    std::size_t counted = 0;
    std::vector<double> sums(static_cast<std::size_t>(group_count));
    for (Eigen::Index i = 0; i < n; ++i) {
        const int gi = groups[i];
        if (gi < 0) continue;
        ++counted;
        if (sizes[gi] == 1) continue;  // singleton: s = 0
        std::fill(sums.begin(), sums.end(), 0.0);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i || groups[j] < 0) continue;
            sums[groups[j]] += distance(points, i, j, metric, norms);
        }
        const double a = sums[gi] / static_cast<double>(sizes[gi] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int g = 0; g < group_count; ++g) {
            if (g == gi || sizes[g] == 0) continue;
            b = std::min(b, sums[g] / static_cast<double>(sizes[g]));
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(counted);
}

double silhouette_score(const EmbeddingSet& set, const ClusterConfig& config, DistanceMetric metric) {
    return silhouette_score(set.matrix(), resolve_groups(set, config), metric);
}

}  // namespace lumikit
