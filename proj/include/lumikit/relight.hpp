#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lumikit/color.hpp"
#include "lumikit/image.hpp"

namespace lumikit {

// --- flat light adaptation ---------------------------------------------------

struct FlatLightResult {
    LinearImage image;
    /// Pixels with at least one channel above 1 (clamped when encoded).
    std::size_t clipped_pixels = 0;
};

/// Multiplies every pixel by diag(gains).
FlatLightResult apply_flat_light(const LinearImage& image, const IlluminantRgb& illuminant);

// --- Canny -------------------------------------------------------------------

struct CannyParams {
    double low_threshold = 0.1;
    double high_threshold = 0.2;
    double blur_sigma = 1.4;
    /// Thresholds are fractions of the image's maximum gradient magnitude.
    /// When false they are absolute luminance-gradient magnitudes.
    bool relative = true;

    void validate() const;
    /// Half-width of the Gaussian kernel: ceil(3 sigma).
    int blur_radius() const;
};

/// Classic Canny on Rec. 709 luminance: Gaussian blur, Sobel gradients,
/// non-maximum suppression along the gradient direction quantized to 45
/// degrees, double-threshold hysteresis with 8-connectivity.
EdgeMap canny_edges(const LinearImage& image, const CannyParams& params = {});
EdgeMap canny_edges_plane(int width, int height, std::span<const double> luminance,
                          const CannyParams& params = {});

/// Fraction of pixels on which two equally sized edge maps disagree.
double edge_disagreement(const EdgeMap& a, const EdgeMap& b);

struct EdgeInvariance {
    double disagreement = 0.0;
    bool holds = false;
};

/// Edge maps of `image` before and after relighting must disagree on less
/// than `tolerance` of pixels.
EdgeInvariance invariance_under_flat_light(const LinearImage& image,
                                           const IlluminantRgb& illuminant,
                                           const CannyParams& params = {},
                                           double tolerance = 0.02);

// --- masks ---------------------------------------------------------------------

/// Area-average pooling. Each target cell averages the source pixels it
/// overlaps, weighted by overlap area.
SoftMask downsample_mask(const BinaryMap& mask, int target_width, int target_height);

// --- prompts and manifests -----------------------------------------------------

struct PromptTemplate {
    std::string concept_token = "[v]";
    std::string class_noun;
    /// Must contain exactly one "{}" placeholder for the illuminant token.
    std::string illuminant_token_pattern = "[{}*]";

    std::string illuminant_token(PresetId id) const;
    /// "a photo of <concept> <class> in <illuminant token> illuminant"
    std::string render(PresetId id) const;
};

struct ManifestRecord {
    std::string source_image_path;
    std::string preset_id;
    std::string variant_image_path;
    std::string mask_path;
    std::string edge_map_path;
    std::string prompt_text;
    Vec3 illuminant_gains{1.0, 1.0, 1.0};
    std::size_t clipped_pixel_count = 0;

    friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

/// Records plus the directory their relative paths are resolved against.
struct AugmentationManifest {
    std::filesystem::path base_dir;
    std::vector<ManifestRecord> records;
};

/// One JSON object per line, fields named exactly as ManifestRecord.
std::string serialize_manifest(const std::vector<ManifestRecord>& records);
std::vector<ManifestRecord> parse_manifest(const std::string& text);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRecord>& records);
AugmentationManifest read_manifest(const std::filesystem::path& path);

struct AugmentOptions {
    CannyParams canny;
    int bit_depth = 8;
    int threads = 1;
    std::string manifest_name = "manifest.jsonl";
};

/// Relights `image` under each preset and writes variants, one shared edge map,
/// the mask and the manifest into `out_dir`. Returns the manifest.
AugmentationManifest generate_variants(const LinearImage& image, const ForegroundMask& mask,
                                       const PromptTemplate& prompt,
                                       const std::vector<PresetId>& presets,
                                       const std::filesystem::path& out_dir,
                                       const std::string& source_image_path,
                                       const AugmentOptions& options = {});

}  // namespace lumikit
