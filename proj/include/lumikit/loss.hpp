#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lumikit/image.hpp"

namespace lumikit {

/// Dense H x W x C tensor, channel-interleaved (HWC).
class Tensor {
public:
    Tensor(int height, int width, int channels);
    Tensor(int height, int width, int channels, std::vector<double> data);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    int channels() const noexcept { return channels_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool same_shape(const Tensor& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
    }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    int height_;
    int width_;
    int channels_;
    std::vector<double> data_;
};

/// Per-element squared error, kept before any reduction.
class ResidualMap {
public:
    ResidualMap(int height, int width, int channels, std::vector<double> data);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    int channels() const noexcept { return channels_; }
    std::size_t size() const noexcept { return data_.size(); }
    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const ResidualMap&, const ResidualMap&) = default;

private:
    int height_;
    int width_;
    int channels_;
    std::vector<double> data_;
};

inline constexpr double kDefaultMrlLambda = 0.2;

/// Foreground weight of the masked reconstruction loss, in [0, 1].
class MrlParams {
public:
    explicit MrlParams(double lambda = kDefaultMrlLambda);
    double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

ResidualMap residual_map(const Tensor& pred, const Tensor& target);

/// Per-pixel weights w = (1 - lambda)(1 - M) + lambda M, broadcast over
/// channels. Returned with one entry per tensor element.
std::vector<double> mrl_weights(const SoftMask& mask, int channels, const MrlParams& params);

/// Masked reconstruction loss: mean over all H*W*C elements of w * residual.
double mrl(const ResidualMap& residual, const SoftMask& mask, const MrlParams& params);

/// d mrl / d pred = 2 w (pred - target) / N.
Tensor mrl_gradient(const Tensor& pred, const Tensor& target, const SoftMask& mask,
                    const MrlParams& params);

/// Region statistics for a closed-form lambda sweep: mean residual inside and
/// outside the (binary) mask and the foreground fraction.
struct RegionResiduals {
    double foreground = 0.0;
    double background = 0.0;
    double foreground_fraction = 0.5;
};

struct LambdaLoss {
    double lambda = 0.0;
    double loss = 0.0;
};

/// Lambda values of the foreground-weight ablation, in table order.
std::vector<double> ablation_lambdas();

std::vector<LambdaLoss> lambda_sweep(const RegionResiduals& regions, std::span<const double> lambdas);
std::vector<LambdaLoss> lambda_sweep(const ResidualMap& residual, const SoftMask& mask,
                                     std::span<const double> lambdas);

// --- self-check ---------------------------------------------------------------

struct GradientCheckResult {
    double max_relative_error = 0.0;
    std::size_t elements = 0;
};

/// Compares mrl_gradient with central finite differences of mrl.
GradientCheckResult check_mrl_gradient(const Tensor& pred, const Tensor& target,
                                       const SoftMask& mask, const MrlParams& params,
                                       double step = 1e-4);

struct LossSelfCheck {
    std::size_t gradient_cases = 0;
    double worst_gradient_error = 0.0;
    double worst_closed_form_error = 0.0;
    double worst_affine_error = 0.0;
    std::vector<LambdaLoss> sweep;
    bool passed = false;
};

/// Built-in fixtures: closed-form cases, `cases` random 8x8x4 gradient checks
/// and the ablation lambda sweep.
LossSelfCheck run_loss_self_check(std::uint64_t seed = 42, std::size_t cases = 100);

// --- tensor files -------------------------------------------------------------

/// Header: JSON {"dtype": "f32le", "shape": [H, W, C] or [H, W], "data_file": "<rel path>"}.
/// Data: little-endian float32, row-major.
Tensor read_tensor(const std::filesystem::path& header_path);
void write_tensor(const std::filesystem::path& header_path, const Tensor& tensor);

}  // namespace lumikit
