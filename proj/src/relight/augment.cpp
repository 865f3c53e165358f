#include <nlohmann/json.hpp>

#include <set>
#include <sstream>

#include "lumikit/errors.hpp"
#include "lumikit/io.hpp"
#include "lumikit/parallel.hpp"
#include "lumikit/relight.hpp"

namespace lumikit {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    if (needle.empty()) return 0;
    std::size_t count = 0;
    for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

ordered_json record_to_json(const ManifestRecord& r) {
    ordered_json j;
    j["source_image_path"] = r.source_image_path;
    j["preset_id"] = r.preset_id;
    j["variant_image_path"] = r.variant_image_path;
    j["mask_path"] = r.mask_path;
    j["edge_map_path"] = r.edge_map_path;
    j["prompt_text"] = r.prompt_text;
    j["illuminant_gains"] = {r.illuminant_gains[0], r.illuminant_gains[1], r.illuminant_gains[2]};
    j["clipped_pixel_count"] = r.clipped_pixel_count;
    return j;
}

ManifestRecord record_from_json(const nlohmann::json& j) {
    ManifestRecord r;
    r.variant_image_path = j.at("variant_image_path").get<std::string>();
    r.preset_id = j.at("preset_id").get<std::string>();
    require_preset_id(r.preset_id);
    r.mask_path = j.at("mask_path").get<std::string>();
    // Manifests from external generators may omit the augmentation-only fields.
    r.source_image_path = j.value("source_image_path", std::string{});
    r.edge_map_path = j.value("edge_map_path", std::string{});
    r.prompt_text = j.value("prompt_text", std::string{});
    if (j.contains("illuminant_gains")) {
        const auto& g = j.at("illuminant_gains");
        if (!g.is_array() || g.size() != 3) {
            throw ValidationError("illuminant_gains must be a 3-element array");
        }
        for (int c = 0; c < 3; ++c) r.illuminant_gains[c] = g[c].get<double>();
    } else {
        r.illuminant_gains = preset_to_illuminant_rgb(*parse_preset_id(r.preset_id)).gains();
    }
    r.clipped_pixel_count = j.value("clipped_pixel_count", std::size_t{0});
    return r;
}

std::string relative_to(const fs::path& target, const fs::path& base) {
    return fs::relative(fs::absolute(target), fs::absolute(base)).generic_string();
}

}  // namespace

std::string PromptTemplate::illuminant_token(PresetId id) const {
    const auto pos = illuminant_token_pattern.find("{}");
    if (pos == std::string::npos || illuminant_token_pattern.find("{}", pos + 2) != std::string::npos) {
        throw ValidationError("illuminant token pattern needs exactly one '{}' placeholder");
    }
    std::string token = illuminant_token_pattern;
    token.replace(pos, 2, preset_id_string(id));
    return token;
}

std::string PromptTemplate::render(PresetId id) const {
    if (concept_token.empty() || class_noun.empty()) {
        throw ValidationError("prompt template needs a concept token and a class noun");
    }
    const std::string token = illuminant_token(id);
    std::string prompt = "a photo of " + concept_token + " " + class_noun + " in " + token + " illuminant";
    if (count_occurrences(prompt, concept_token) != 1 || count_occurrences(prompt, token) != 1) {
        throw ValidationError("rendered prompt must contain the concept and illuminant tokens exactly once: " +
                              prompt);
    }
    return prompt;
}

std::string serialize_manifest(const std::vector<ManifestRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += record_to_json(r).dump();
        out += '\n';
    }
    return out;
}

std::vector<ManifestRecord> parse_manifest(const std::string& text) {
    std::vector<ManifestRecord> records;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            records.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("manifest line " + std::to_string(line_no) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("manifest line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

void write_manifest(const fs::path& path, const std::vector<ManifestRecord>& records) {
    write_text_file(path, serialize_manifest(records));
}

AugmentationManifest read_manifest(const fs::path& path) {
    AugmentationManifest m;
    m.base_dir = path.parent_path();
    m.records = parse_manifest(read_text_file(path));
    return m;
}

AugmentationManifest generate_variants(const LinearImage& image, const ForegroundMask& mask,
                                       const PromptTemplate& prompt,
                                       const std::vector<PresetId>& presets, const fs::path& out_dir,
                                       const std::string& source_image_path,
                                       const AugmentOptions& options) {
    if (mask.width() != image.width() || mask.height() != image.height()) {
        throw ValidationError("mask is " + std::to_string(mask.width()) + "x" +
                              std::to_string(mask.height()) + " but image is " +
                              std::to_string(image.width()) + "x" + std::to_string(image.height()));
    }
    if (presets.empty()) throw ValidationError("at least one preset is required");
    std::set<PresetId> seen;
    for (PresetId p : presets) {
        if (!seen.insert(p).second) {
            throw ValidationError("preset " + preset_id_string(p) + " listed twice");
        }
    }
    options.canny.validate();
    // Render every prompt up front so template errors surface before any I/O.
    std::vector<std::string> prompts;
    for (PresetId p : presets) prompts.push_back(prompt.render(p));

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

    const std::string stem = source_image_path.empty() ? std::string("image")
                                                       : fs::path(source_image_path).stem().string();
    const std::string mask_name = stem + "_mask.png";
    const std::string edge_name = stem + "_edges.png";
    save_binary_png(out_dir / mask_name, mask);
    save_binary_png(out_dir / edge_name, canny_edges(image, options.canny));

    const std::string source_rel =
        source_image_path.empty() ? std::string{} : relative_to(source_image_path, out_dir);

    std::vector<ManifestRecord> records(presets.size());
    parallel_for(presets.size(), options.threads, [&](std::size_t i) {
        const PresetId id = presets[i];
        const IlluminantRgb& gains = preset_to_illuminant_rgb(id);
        const FlatLightResult lit = apply_flat_light(image, gains);
        const std::string variant_name = stem + "_" + preset_id_string(id) + ".png";
        std::size_t clipped = 0;
        save_linear_image(out_dir / variant_name, lit.image, options.bit_depth, &clipped);

        ManifestRecord& r = records[i];
        r.source_image_path = source_rel;
        r.preset_id = preset_id_string(id);
        r.variant_image_path = variant_name;
        r.mask_path = mask_name;
        r.edge_map_path = edge_name;
        r.prompt_text = prompts[i];
        r.illuminant_gains = gains.gains();
        r.clipped_pixel_count = clipped;
    });

    write_manifest(out_dir / options.manifest_name, records);
    return {out_dir, std::move(records)};
}

}  // namespace lumikit
