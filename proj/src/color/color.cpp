#include "lumikit/color.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lumikit/errors.hpp"

namespace lumikit {

namespace {

constexpr double kPlanckC1 = 3.741771852e-16;  // 2*pi*h*c^2, W m^2
constexpr double kPlanckC2 = 1.438776877e-2;   // h*c/k, m K

// IEC 61966-2-1 linear sRGB -> XYZ (D65).
constexpr double kRgbToXyz[3][3] = {
    {0.4124, 0.3576, 0.1805},
    {0.2126, 0.7152, 0.0722},
    {0.0193, 0.1192, 0.9505},
};

struct Mat3 {
    double m[3][3];
};

Mat3 invert(const double (&a)[3][3]) {
    const double c00 = a[1][1] * a[2][2] - a[1][2] * a[2][1];
    const double c01 = a[1][2] * a[2][0] - a[1][0] * a[2][2];
    const double c02 = a[1][0] * a[2][1] - a[1][1] * a[2][0];
    const double det = a[0][0] * c00 + a[0][1] * c01 + a[0][2] * c02;
    Mat3 r{};
    r.m[0][0] = c00 / det;
    r.m[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
    r.m[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
    r.m[1][0] = c01 / det;
    r.m[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
    r.m[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
    r.m[2][0] = c02 / det;
    r.m[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
    r.m[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
    return r;
}

const Mat3& xyz_to_rgb_matrix() {
    static const Mat3 inv = invert(kRgbToXyz);
    return inv;
}

constexpr IlluminantPreset kPresets[] = {
    {PresetId::c1, "Tungsten", 2850.0},
    {PresetId::c2, "", 3300.0},
    {PresetId::c3, "Fluorescent", 3800.0},
    {PresetId::c4, "", 4500.0},
    {PresetId::c5, "Cloudy", 6500.0},
    {PresetId::c6, "", 7000.0},
    {PresetId::c7, "Shade", 7500.0},
};

constexpr IlluminantPreset kIdentityPreset{PresetId::c0, "White", 6504.0};

double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    if (t > delta * delta * delta) return std::cbrt(t);
    return t / (3.0 * delta * delta) + 4.0 / 29.0;
}

}  // namespace

ColorTemperature::ColorTemperature(double kelvin) : kelvin_(kelvin) {
    if (!(kelvin >= kMin && kelvin <= kMax)) {
        throw DomainError("color temperature " + std::to_string(kelvin) +
                          " K outside [1000, 20000] K");
    }
}

Chromaticity::Chromaticity(double x, double y) : x_(x), y_(y) {
    if (!(x > 0.0 && y > 0.0 && x + y < 1.0)) {
        throw DomainError("invalid chromaticity (" + std::to_string(x) + ", " +
                          std::to_string(y) + ")");
    }
}

IlluminantRgb IlluminantRgb::from_gains(const Vec3& gains) {
    for (double g : gains) {
        if (!std::isfinite(g) || g <= 0.0) {
            throw DomainError("illuminant gains must be positive and finite");
        }
    }
    const double green = gains[1];
    return IlluminantRgb({gains[0] / green, 1.0, gains[2] / green});
}

IlluminantRgb IlluminantRgb::inverse() const {
    return from_gains({1.0 / gains_[0], 1.0 / gains_[1], 1.0 / gains_[2]});
}

std::span<const IlluminantPreset> canonical_presets() noexcept { return kPresets; }

const IlluminantPreset& preset(PresetId id) {
    if (id == PresetId::c0) return kIdentityPreset;
    return kPresets[static_cast<int>(id) - 1];
}

std::string preset_id_string(PresetId id) {
    return "c" + std::to_string(static_cast<int>(id));
}

std::optional<PresetId> parse_preset_id(std::string_view text) {
    if (text.size() != 2 || text[0] != 'c' || text[1] < '0' || text[1] > '7') {
        return std::nullopt;
    }
    return static_cast<PresetId>(text[1] - '0');
}

PresetId require_preset_id(std::string_view text) {
    if (auto id = parse_preset_id(text)) return *id;
    throw ValidationError("unknown preset '" + std::string(text) +
                          "'; valid ids: c1, c2, c3, c4, c5, c6, c7 (c0 = identity)");
}

double planck_spectral_radiance(ColorTemperature t, double wavelength_nm) {
    if (!(wavelength_nm >= kCmfFirstNm && wavelength_nm <= kCmfLastNm)) {
        throw DomainError("wavelength " + std::to_string(wavelength_nm) +
                          " nm outside [360, 830] nm");
    }
    const double lambda = wavelength_nm * 1e-9;
    const double l5 = lambda * lambda * lambda * lambda * lambda;
    return kPlanckC1 / (l5 * std::expm1(kPlanckC2 / (lambda * t.kelvin())));
}

Vec3 spectrum_to_xyz(std::span<const double> spd) {
    if (spd.size() != kCmfRows) {
        throw ValidationError("spectrum must have 471 samples (360-830 nm, 1 nm)");
    }
    const auto cmf = cie1931_cmf();
    Vec3 xyz{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < kCmfRows; ++i) {
        for (int c = 0; c < 3; ++c) xyz[c] += spd[i] * cmf[i][c];
    }
    return xyz;
}

Chromaticity spectrum_to_chromaticity(std::span<const double> spd) {
    const Vec3 xyz = spectrum_to_xyz(spd);
    const double sum = xyz[0] + xyz[1] + xyz[2];
    if (!(sum > 0.0)) throw DegenerateError("spectrum integrates to zero");
    return Chromaticity(xyz[0] / sum, xyz[1] / sum);
}

Chromaticity kelvin_to_chromaticity(ColorTemperature t) {
    std::vector<double> spd(kCmfRows);
    for (std::size_t i = 0; i < kCmfRows; ++i) {
        spd[i] = planck_spectral_radiance(t, kCmfFirstNm + static_cast<double>(i));
    }
    return spectrum_to_chromaticity(spd);
}

IlluminantRgb chromaticity_to_illuminant_rgb(const Chromaticity& c) {
    const Vec3 xyz{c.x() / c.y(), 1.0, (1.0 - c.x() - c.y()) / c.y()};
    const Vec3 rgb = xyz_to_linear_srgb(xyz);
    static constexpr const char* kNames[] = {"red", "green", "blue"};
    for (int ch = 0; ch < 3; ++ch) {
        if (!(rgb[ch] > 0.0)) {
            throw DomainError(std::string("chromaticity out of sRGB gamut: ") +
                              kNames[ch] + " channel is non-positive");
        }
    }
    return IlluminantRgb::from_gains(rgb);
}

const IlluminantRgb& preset_to_illuminant_rgb(PresetId id) {
    static const std::array<IlluminantRgb, 8> cache = [] {
        std::array<IlluminantRgb, 8> out{
            IlluminantRgb::identity(), IlluminantRgb::identity(),
            IlluminantRgb::identity(), IlluminantRgb::identity(),
            IlluminantRgb::identity(), IlluminantRgb::identity(),
            IlluminantRgb::identity(), IlluminantRgb::identity()};
        for (const auto& p : kPresets) {
            out[static_cast<int>(p.id)] =
                chromaticity_to_illuminant_rgb(kelvin_to_chromaticity(p.temperature()));
        }
        return out;
    }();
    return cache[static_cast<int>(id)];
}

double srgb_encode(double linear, std::size_t* clamped) noexcept {
    if (!(linear >= 0.0) || linear > 1.0) {
        if (clamped) ++*clamped;
        linear = linear > 1.0 ? 1.0 : 0.0;
    }
    if (linear <= 0.0031308) return 12.92 * linear;
    if (linear == 1.0) return 1.0;  // 1.055 - 0.055 rounds one ulp short
    return 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

double srgb_decode(double encoded, std::size_t* clamped) noexcept {
    if (!(encoded >= 0.0) || encoded > 1.0) {
        if (clamped) ++*clamped;
        encoded = encoded > 1.0 ? 1.0 : 0.0;
    }
    if (encoded <= 0.04045) return encoded / 12.92;
    return std::pow((encoded + 0.055) / 1.055, 2.4);
}

Vec3 linear_srgb_to_xyz(const Vec3& rgb) noexcept {
    Vec3 out{};
    for (int r = 0; r < 3; ++r) {
        out[r] = kRgbToXyz[r][0] * rgb[0] + kRgbToXyz[r][1] * rgb[1] + kRgbToXyz[r][2] * rgb[2];
    }
    return out;
}

Vec3 xyz_to_linear_srgb(const Vec3& xyz) noexcept {
    const auto& m = xyz_to_rgb_matrix().m;
    Vec3 out{};
    for (int r = 0; r < 3; ++r) {
        out[r] = m[r][0] * xyz[0] + m[r][1] * xyz[1] + m[r][2] * xyz[2];
    }
    return out;
}

LabColor linear_srgb_to_lab(const Vec3& rgb) {
    static const Vec3 white = linear_srgb_to_xyz({1.0, 1.0, 1.0});
    const Vec3 xyz = linear_srgb_to_xyz(rgb);
    const double fx = lab_f(xyz[0] / white[0]);
    const double fy = lab_f(xyz[1] / white[1]);
    const double fz = lab_f(xyz[2] / white[2]);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

double angular_error(const Vec3& a, const Vec3& b) {
    const double na = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    const double nb = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
    if (!(na > 0.0) || !(nb > 0.0)) {
        throw DomainError("angular error of a zero vector is undefined");
    }
    const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    const double cosine = std::clamp(dot / (na * nb), -1.0, 1.0);
    return std::clamp(std::acos(cosine) * 180.0 / std::numbers::pi, 0.0, 180.0);
}

double lab_mse(const Vec3& a, const Vec3& b) {
    const LabColor la = linear_srgb_to_lab(a);
    const LabColor lb = linear_srgb_to_lab(b);
    const double dl = la.L - lb.L;
    const double da = la.a - lb.a;
    const double db = la.b - lb.b;
    return (dl * dl + da * da + db * db) / 3.0;
}

}  // namespace lumikit
