#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace lumikit {

using Vec3 = std::array<double, 3>;

/// Blackbody temperature in kelvin, restricted to [1000, 20000].
class ColorTemperature {
public:
    static constexpr double kMin = 1000.0;
    static constexpr double kMax = 20000.0;

    explicit ColorTemperature(double kelvin);
    double kelvin() const noexcept { return kelvin_; }

private:
    double kelvin_;
};

/// CIE 1931 xy chromaticity. Both coordinates positive and x + y < 1.
class Chromaticity {
public:
    Chromaticity(double x, double y);
    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }

private:
    double x_;
    double y_;
};

struct LabColor {
    double L = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// Per-channel von Kries gains in linear sRGB, normalized so green == 1.
class IlluminantRgb {
public:
    /// Normalizes `gains` by its green component. Rejects non-positive or
    /// non-finite components.
    static IlluminantRgb from_gains(const Vec3& gains);
    static IlluminantRgb identity() { return from_gains({1.0, 1.0, 1.0}); }

    const Vec3& gains() const noexcept { return gains_; }
    double operator[](std::size_t ch) const noexcept { return gains_[ch]; }

    /// Componentwise reciprocal, renormalized to green == 1.
    IlluminantRgb inverse() const;

private:
    explicit IlluminantRgb(const Vec3& g) : gains_(g) {}
    Vec3 gains_;
};

/// c0 is the optional identity (white-light) record; c1..c7 are the canonical presets.
enum class PresetId { c0 = 0, c1, c2, c3, c4, c5, c6, c7 };

struct IlluminantPreset {
    PresetId id;
    std::string_view name;
    double kelvin;

    ColorTemperature temperature() const { return ColorTemperature(kelvin); }
};

/// The seven canonical presets in increasing temperature order.
std::span<const IlluminantPreset> canonical_presets() noexcept;
const IlluminantPreset& preset(PresetId id);

std::string preset_id_string(PresetId id);
std::optional<PresetId> parse_preset_id(std::string_view text);
/// Parses, throwing ValidationError that lists the valid ids.
PresetId require_preset_id(std::string_view text);

// --- spectral ---------------------------------------------------------------

inline constexpr int kCmfFirstNm = 360;
inline constexpr int kCmfLastNm = 830;
inline constexpr std::size_t kCmfRows = kCmfLastNm - kCmfFirstNm + 1;

/// CIE 1931 2 degree color-matching functions (xbar, ybar, zbar), 1 nm
/// steps over [360, 830].
std::span<const Vec3> cie1931_cmf() noexcept;
/// SHA-256 of the committed CMF data file, hex encoded.
std::string_view cmf_sha256() noexcept;

/// Relative spectral radiance of a blackbody (Planck's law). Throws
/// DomainError for wavelengths outside [360, 830] nm.
double planck_spectral_radiance(ColorTemperature t, double wavelength_nm);

/// Integrates an SPD sampled at 1 nm over [360, 830] against the CMFs.
Vec3 spectrum_to_xyz(std::span<const double> spd);
Chromaticity spectrum_to_chromaticity(std::span<const double> spd);

Chromaticity kelvin_to_chromaticity(ColorTemperature t);

/// xy -> XYZ (Y = 1) -> linear sRGB, renormalized to green == 1. Throws
/// DomainError naming the channel if any channel is non-positive.
IlluminantRgb chromaticity_to_illuminant_rgb(const Chromaticity& c);

/// Cached; identical bits on every call. c0 maps to the identity.
const IlluminantRgb& preset_to_illuminant_rgb(PresetId id);

// --- transfer function and color spaces --------------------------------------

/// sRGB OETF. Inputs outside [0, 1] are clamped; when `clamped` is given it
/// is incremented for every clamped input.
double srgb_encode(double linear, std::size_t* clamped = nullptr) noexcept;
double srgb_decode(double encoded, std::size_t* clamped = nullptr) noexcept;

Vec3 linear_srgb_to_xyz(const Vec3& rgb) noexcept;
Vec3 xyz_to_linear_srgb(const Vec3& xyz) noexcept;
/// CIELAB relative to the D65 white (sRGB white maps to L = 100).
LabColor linear_srgb_to_lab(const Vec3& rgb);

/// Rec. 709 luminance of a linear sRGB triple.
inline double luminance(double r, double g, double b) noexcept {
    return 0.2126 * r + 0.7152 * g + 0.0722 * b;
}

// --- metrics ----------------------------------------------------------------

/// Angle in degrees between two nonzero, nonnegative 3-vectors.
double angular_error(const Vec3& a, const Vec3& b);

/// Mean over L, a, b of the squared component differences.
double lab_mse(const Vec3& a, const Vec3& b);

}  // namespace lumikit
