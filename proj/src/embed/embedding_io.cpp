#include <bit>
#include <cmath>
#include <cstring>
#include <set>

#include "lumikit/embed.hpp"
#include "lumikit/errors.hpp"
#include "lumikit/io.hpp"

namespace lumikit {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

static_assert(std::endian::native == std::endian::little, "f32le I/O assumes a little-endian host");

std::string_view to_string(EmbeddingLevel level) noexcept {
    return level == EmbeddingLevel::token ? "token" : "sentence";
}

std::string_view to_string(EmbeddingCategory category) noexcept {
    switch (category) {
        case EmbeddingCategory::named_illuminant: return "named_illuminant";
        case EmbeddingCategory::kelvin_value: return "kelvin_value";
        case EmbeddingCategory::general_lighting: return "general_lighting";
        case EmbeddingCategory::generic_numeral: return "generic_numeral";
    }
    return "named_illuminant";
}

std::optional<EmbeddingLevel> parse_level(std::string_view text) noexcept {
    if (text == "token") return EmbeddingLevel::token;
    if (text == "sentence") return EmbeddingLevel::sentence;
    return std::nullopt;
}

std::optional<EmbeddingCategory> parse_category(std::string_view text) noexcept {
    for (auto c : {EmbeddingCategory::named_illuminant, EmbeddingCategory::kelvin_value,
                   EmbeddingCategory::general_lighting, EmbeddingCategory::generic_numeral}) {
        if (to_string(c) == text) return c;
    }
    return std::nullopt;
}

EmbeddingSet::EmbeddingSet(std::string encoder_id, EmbeddingLevel level, int dim,
                           std::vector<EmbeddingItem> items)
    : encoder_id_(std::move(encoder_id)), level_(level), dim_(dim), items_(std::move(items)) {
    if (dim_ <= 0) throw ValidationError("embedding dim must be positive");
    if (items_.size() < 2) {
        throw ValidationError("embedding set '" + encoder_id_ + "' needs at least two items");
    }
    std::set<std::string> labels;
    for (const auto& item : items_) {
        if (!labels.insert(item.label).second) {
            throw ValidationError("duplicate embedding label '" + item.label + "'");
        }
        if (item.vector.size() != static_cast<std::size_t>(dim_)) {
            throw ValidationError("embedding '" + item.label + "' has " +
                                  std::to_string(item.vector.size()) + " values, expected " +
                                  std::to_string(dim_));
        }
        for (float v : item.vector) {
            if (!std::isfinite(v)) {
                throw ValidationError("embedding '" + item.label + "' contains NaN or Inf");
            }
        }
    }
}

std::optional<std::size_t> EmbeddingSet::find(std::string_view label) const {
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (items_[i].label == label) return i;
    }
    return std::nullopt;
}

Eigen::MatrixXd EmbeddingSet::matrix() const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(items_.size()), dim_);
    for (std::size_t i = 0; i < items_.size(); ++i) {
        for (int d = 0; d < dim_; ++d) m(static_cast<Eigen::Index>(i), d) = items_[i].vector[d];
    }
    return m;
}

namespace {

EmbeddingSet parse_one(const nlohmann::json& j, const fs::path& manifest_path) {
    const std::string where = manifest_path.string();
    std::string encoder_id, data_file, checksum;
    EmbeddingLevel level{};
    int dim = 0;
    std::size_t count = 0;
    struct Entry {
        std::string label;
        EmbeddingCategory category;
        std::size_t row;
    };
    std::vector<Entry> entries;
    try {
        encoder_id = j.at("encoder_id").get<std::string>();
        const auto lvl = parse_level(j.at("level").get<std::string>());
        if (!lvl) throw ValidationError(where + ": unknown level '" + j.at("level").get<std::string>() + "'");
        level = *lvl;
        dim = j.at("dim").get<int>();
        count = j.at("count").get<std::size_t>();
        if (j.value("dtype", std::string{}) != "f32le") {
            throw ValidationError(where + ": dtype must be \"f32le\"");
        }
        data_file = j.at("data_file").get<std::string>();
        checksum = j.at("checksum").get<std::string>();
        for (const auto& it : j.at("items")) {
            const std::string label = it.at("label").get<std::string>();
            const std::string cat = it.at("category").get<std::string>();
            const auto category = parse_category(cat);
            if (!category) {
                throw ValidationError(where + ": item '" + label + "' has unknown category '" + cat + "'");
            }
            entries.push_back({label, *category, it.at("row_index").get<std::size_t>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(where + ": " + e.what());
    }
    if (dim <= 0) throw ValidationError(where + ": dim must be positive");
    if (entries.empty()) throw ValidationError(where + ": item list is empty");
    if (entries.size() != count) {
        throw ValidationError(where + ": count " + std::to_string(count) + " but " +
                              std::to_string(entries.size()) + " items listed");
    }
    std::vector<const Entry*> by_row(count, nullptr);
    for (const auto& e : entries) {
        if (e.row >= count || by_row[e.row] != nullptr) {
            throw ValidationError(where + ": item '" + e.label + "' has invalid or duplicate row_index " +
                                  std::to_string(e.row));
        }
        by_row[e.row] = &e;
    }

    const fs::path data_path = manifest_path.parent_path() / data_file;
    const auto bytes = read_file_bytes(data_path);
    const std::size_t row_bytes = static_cast<std::size_t>(dim) * sizeof(float);
    if (bytes.size() != count * row_bytes) {
        const std::size_t full_rows = bytes.size() / row_bytes;
        if (full_rows < count) {
            const std::size_t have = (bytes.size() - full_rows * row_bytes) / sizeof(float);
            throw ValidationError(data_path.string() + ": row '" + by_row[full_rows]->label +
                                  "' (row " + std::to_string(full_rows) + ") has " +
                                  std::to_string(have) + " floats, expected " + std::to_string(dim) +
                                  " (data ends at byte offset " + std::to_string(bytes.size()) + ")");
        }
        throw ValidationError(data_path.string() + ": " +
                              std::to_string(bytes.size() - count * row_bytes) +
                              " trailing bytes after the last row (byte offset " +
                              std::to_string(count * row_bytes) + ")");
    }
    std::string expected = checksum;
    if (expected.starts_with("sha256:")) expected = expected.substr(7);
    const std::string actual = sha256_hex(bytes);
    if (actual != expected) {
        throw ValidationError(data_path.string() + ": checksum mismatch (manifest " + expected +
                              ", file " + actual + ")");
    }

    std::vector<EmbeddingItem> items;
    items.reserve(count);
    for (std::size_t r = 0; r < count; ++r) {
        EmbeddingItem item{by_row[r]->label, by_row[r]->category, std::vector<float>(dim)};
        std::memcpy(item.vector.data(), bytes.data() + r * row_bytes, row_bytes);
        for (int d = 0; d < dim; ++d) {
            if (!std::isfinite(item.vector[d])) {
                throw ValidationError(data_path.string() + ": non-finite value in row '" +
                                      item.label + "' at byte offset " +
                                      std::to_string(r * row_bytes + d * sizeof(float)));
            }
        }
        items.push_back(std::move(item));
    }
    return EmbeddingSet(std::move(encoder_id), level, dim, std::move(items));
}

}  // namespace

std::vector<EmbeddingSet> load_embeddings(const fs::path& manifest_path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(manifest_path));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(manifest_path.string() + ": " + e.what());
    }
    std::vector<EmbeddingSet> sets;
    if (j.is_array()) {
        for (const auto& entry : j) sets.push_back(parse_one(entry, manifest_path));
    } else {
        sets.push_back(parse_one(j, manifest_path));
    }
    return sets;
}

void write_embeddings(const EmbeddingSet& set, const fs::path& manifest_path, std::string data_file_name) {
    if (data_file_name.empty()) data_file_name = manifest_path.stem().string() + ".f32";
    const std::size_t row_bytes = static_cast<std::size_t>(set.dim()) * sizeof(float);
    std::vector<std::uint8_t> bytes(set.size() * row_bytes);
    for (std::size_t r = 0; r < set.size(); ++r) {
        std::memcpy(bytes.data() + r * row_bytes, set.items()[r].vector.data(), row_bytes);
    }
    write_file_bytes(manifest_path.parent_path() / data_file_name, bytes);

    ordered_json j;
    j["encoder_id"] = set.encoder_id();
    j["level"] = to_string(set.level());
    j["dim"] = set.dim();
    j["count"] = set.size();
    j["dtype"] = "f32le";
    j["data_file"] = data_file_name;
    j["checksum"] = sha256_hex(bytes);
    ordered_json items = ordered_json::array();
    for (std::size_t r = 0; r < set.size(); ++r) {
        ordered_json it;
        it["label"] = set.items()[r].label;
        it["category"] = to_string(set.items()[r].category);
        it["row_index"] = r;
        items.push_back(std::move(it));
    }
    j["items"] = std::move(items);
    write_text_file(manifest_path, j.dump(2) + "\n");
}

}  // namespace lumikit
