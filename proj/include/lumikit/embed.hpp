#pragma once

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lumikit {

enum class EmbeddingLevel { token, sentence };
enum class EmbeddingCategory { named_illuminant, kelvin_value, general_lighting, generic_numeral };

std::string_view to_string(EmbeddingLevel level) noexcept;
std::string_view to_string(EmbeddingCategory category) noexcept;
std::optional<EmbeddingLevel> parse_level(std::string_view text) noexcept;
std::optional<EmbeddingCategory> parse_category(std::string_view text) noexcept;

struct EmbeddingItem {
    std::string label;
    EmbeddingCategory category;
    std::vector<float> vector;
};

/// Embeddings from one encoder at one level. Vectors share `dim`, are finite,
/// labels are unique and there are at least two items.
class EmbeddingSet {
public:
    EmbeddingSet(std::string encoder_id, EmbeddingLevel level, int dim,
                 std::vector<EmbeddingItem> items);

    const std::string& encoder_id() const noexcept { return encoder_id_; }
    EmbeddingLevel level() const noexcept { return level_; }
    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return items_.size(); }
    const std::vector<EmbeddingItem>& items() const noexcept { return items_; }

    std::optional<std::size_t> find(std::string_view label) const;
    /// items x dim, in item order.
    Eigen::MatrixXd matrix() const;

private:
    std::string encoder_id_;
    EmbeddingLevel level_;
    int dim_;
    std::vector<EmbeddingItem> items_;
};

// --- interchange format -------------------------------------------------------

/// Reads a manifest (one object, or an array of objects) and its raw
/// little-endian float32 row-major data files, verifying checksums.
std::vector<EmbeddingSet> load_embeddings(const std::filesystem::path& manifest_path);

/// Writes `<manifest_path>` and its data file (default: manifest stem + ".f32").
void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& manifest_path,
                      std::string data_file_name = {});

// --- PCA -------------------------------------------------------------------------

struct PcaResult {
    Eigen::VectorXd mean;
    /// dim x k, orthonormal columns; the largest-magnitude coordinate of each
    /// column is positive.
    Eigen::MatrixXd directions;
    /// items x k
    Eigen::MatrixXd projections;
    /// Sample-covariance eigenvalues of the returned components.
    std::vector<double> eigenvalues;
    /// eigenvalue / total variance, non-increasing.
    std::vector<double> explained_variance_ratio;
};

/// PCA of the rows of `data` on the sample covariance. Requires
/// out_dims <= min(dim, rows - 1). Throws DegenerateError for zero variance.
PcaResult pca_project(const Eigen::MatrixXd& data, int out_dims = 2);
PcaResult pca_project(const EmbeddingSet& set, int out_dims = 2);

// --- silhouette -----------------------------------------------------------------------

enum class DistanceMetric { cosine, euclidean };
std::string_view to_string(DistanceMetric metric) noexcept;
std::optional<DistanceMetric> parse_metric(std::string_view text) noexcept;

/// Named grouping of item labels. A member of the form "@<category>" selects
/// every item of that category.
struct ClusterConfig {
    std::string name;
    std::vector<std::pair<std::string, std::vector<std::string>>> groups;
};

/// {"configs": [{"name": ..., "groups": {"<group>": ["label" | "@category", ...]}}]}
std::vector<ClusterConfig> parse_cluster_configs(const std::string& json_text);

/// Resolves `config` against `set`: one group index per item, -1 for ungrouped.
std::vector<int> resolve_groups(const EmbeddingSet& set, const ClusterConfig& config);

/// Mean silhouette over grouped items; items in singleton groups score 0.
double silhouette_score(const EmbeddingSet& set, const ClusterConfig& config,
                        DistanceMetric metric = DistanceMetric::cosine);
double silhouette_score(const Eigen::MatrixXd& points, const std::vector<int>& groups,
                        DistanceMetric metric = DistanceMetric::cosine);

// --- probe suite ------------------------------------------------------------------------

struct SilhouetteCell {
    std::string config;
    std::optional<double> score;
    std::string error;
};

struct ProbeSetReport {
    std::string encoder_id;
    EmbeddingLevel level = EmbeddingLevel::token;
    int dim = 0;
    std::vector<std::string> labels;
    std::vector<EmbeddingCategory> categories;
    std::optional<PcaResult> pca;
    std::string pca_error;
    std::vector<SilhouetteCell> silhouettes;
};

struct ProbeReport {
    DistanceMetric metric = DistanceMetric::cosine;
    std::vector<ProbeSetReport> sets;
};

struct ProbeOptions {
    DistanceMetric metric = DistanceMetric::cosine;
    int pca_dims = 2;
    int threads = 1;
    /// When set, one PCA scatter plot per set is written here.
    std::optional<std::filesystem::path> plot_dir;
};

ProbeReport run_probe_suite(const std::vector<EmbeddingSet>& sets,
                            const std::vector<ClusterConfig>& configs,
                            const ProbeOptions& options = {});

nlohmann::ordered_json probe_report_to_json(const ProbeReport& report);

}  // namespace lumikit
