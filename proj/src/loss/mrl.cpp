#include <algorithm>
#include <cmath>
#include <string>

#include "lumikit/errors.hpp"
#include "lumikit/loss.hpp"
#include "lumikit/simd/kernels.hpp"

namespace lumikit {

namespace {

std::size_t element_count(int h, int w, int c) {
    if (h <= 0 || w <= 0 || c <= 0) {
        throw ValidationError("tensor dimensions must be positive, got " + std::to_string(h) + "x" +
                              std::to_string(w) + "x" + std::to_string(c));
    }
    return static_cast<std::size_t>(h) * static_cast<std::size_t>(w) * static_cast<std::size_t>(c);
}

void check_mask(const SoftMask& mask, int height, int width) {
    if (mask.width() != width || mask.height() != height) {
        throw ValidationError("mask is " + std::to_string(mask.height()) + "x" +
                              std::to_string(mask.width()) + " but tensor is " +
                              std::to_string(height) + "x" + std::to_string(width));
    }
}

}  // namespace

Tensor::Tensor(int height, int width, int channels)
    : height_(height), width_(width), channels_(channels),
      data_(element_count(height, width, channels), 0.0) {}

Tensor::Tensor(int height, int width, int channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
    if (data_.size() != element_count(height, width, channels)) {
        throw ValidationError("tensor data length does not match its shape");
    }
    for (double v : data_) {
        if (!std::isfinite(v)) throw ValidationError("tensor values must be finite");
    }
}

ResidualMap::ResidualMap(int height, int width, int channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
    if (data_.size() != element_count(height, width, channels)) {
        throw ValidationError("residual map length does not match its shape");
    }
    for (double v : data_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ValidationError("residual map entries must be finite and nonnegative");
        }
    }
}

MrlParams::MrlParams(double lambda) : lambda_(lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw DomainError("lambda " + std::to_string(lambda) + " outside [0, 1]");
    }
}

ResidualMap residual_map(const Tensor& pred, const Tensor& target) {
    if (!pred.same_shape(target)) throw ValidationError("prediction and target shapes differ");
    std::vector<double> out(pred.size());
    simd::active_kernels().squared_diff(pred.data().data(), target.data().data(), out.data(),
                                        out.size());
    return ResidualMap(pred.height(), pred.width(), pred.channels(), std::move(out));
}

std::vector<double> mrl_weights(const SoftMask& mask, int channels, const MrlParams& params) {
    const double lambda = params.lambda();
    const auto m = mask.data();
    std::vector<double> w(m.size() * static_cast<std::size_t>(channels));
    for (std::size_t p = 0; p < m.size(); ++p) {
        const double wp = (1.0 - lambda) * (1.0 - m[p]) + lambda * m[p];
        std::fill_n(w.begin() + static_cast<std::ptrdiff_t>(p * channels), channels, wp);
    }
    return w;
}

double mrl(const ResidualMap& residual, const SoftMask& mask, const MrlParams& params) {
    check_mask(mask, residual.height(), residual.width());
    const auto w = mrl_weights(mask, residual.channels(), params);
    const double total = simd::active_kernels().dot(w.data(), residual.data().data(), w.size());
    return total / static_cast<double>(residual.size());
}

Tensor mrl_gradient(const Tensor& pred, const Tensor& target, const SoftMask& mask,
                    const MrlParams& params) {
    if (!pred.same_shape(target)) throw ValidationError("prediction and target shapes differ");
    check_mask(mask, pred.height(), pred.width());
    const auto w = mrl_weights(mask, pred.channels(), params);
    Tensor grad(pred.height(), pred.width(), pred.channels());
    simd::active_kernels().weighted_gradient(pred.data().data(), target.data().data(), w.data(),
                                             grad.data().data(), grad.size(),
                                             static_cast<double>(grad.size()));
    return grad;
}

std::vector<double> ablation_lambdas() { return {1.0, 0.8, 0.6, 0.4, 0.2, 0.0}; }

std::vector<LambdaLoss> lambda_sweep(const RegionResiduals& regions, std::span<const double> lambdas) {
    if (lambdas.empty()) throw ValidationError("lambda sweep needs at least one lambda");
    const double f = regions.foreground_fraction;
    if (!(f >= 0.0 && f <= 1.0)) throw DomainError("foreground fraction outside [0, 1]");
    std::vector<LambdaLoss> out;
    out.reserve(lambdas.size());
    for (double l : lambdas) {
        const MrlParams p(l);
        const double lambda = p.lambda();
        out.push_back({lambda, (1.0 - lambda) * (1.0 - f) * regions.background +
                                   lambda * f * regions.foreground});
    }
    return out;
}

std::vector<LambdaLoss> lambda_sweep(const ResidualMap& residual, const SoftMask& mask,
                                     std::span<const double> lambdas) {
    if (lambdas.empty()) throw ValidationError("lambda sweep needs at least one lambda");
    std::vector<LambdaLoss> out;
    out.reserve(lambdas.size());
    for (double l : lambdas) out.push_back({l, mrl(residual, mask, MrlParams(l))});
    return out;
}

}  // namespace lumikit
