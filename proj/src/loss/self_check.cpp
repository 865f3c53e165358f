#include <algorithm>
#include <cmath>
#include <random>

#include "lumikit/loss.hpp"

namespace lumikit {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Tensor random_tensor(std::mt19937_64& rng, int h, int w, int c, double lo, double hi) {
    std::vector<double> d(static_cast<std::size_t>(h) * w * c);
    for (double& v : d) v = lo + (hi - lo) * uniform01(rng);
    return Tensor(h, w, c, std::move(d));
}

SoftMask random_mask(std::mt19937_64& rng, int h, int w, bool binary) {
    std::vector<double> d(static_cast<std::size_t>(h) * w);
    for (double& v : d) {
        const double u = uniform01(rng);
        v = binary ? (u < 0.5 ? 0.0 : 1.0) : u;
    }
    return SoftMask(w, h, std::move(d));
}

double relative_error(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-12});
    return std::abs(a - b) / scale;
}

}  // namespace

GradientCheckResult check_mrl_gradient(const Tensor& pred, const Tensor& target,
                                       const SoftMask& mask, const MrlParams& params,
                                       double step) {
    const Tensor grad = mrl_gradient(pred, target, mask, params);
    GradientCheckResult result;
    result.elements = pred.size();
    Tensor probe = pred;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double orig = probe.data()[i];
        probe.data()[i] = orig + step;
        const double up = mrl(residual_map(probe, target), mask, params);
        probe.data()[i] = orig - step;
        const double down = mrl(residual_map(probe, target), mask, params);
        probe.data()[i] = orig;
        const double fd = (up - down) / (2.0 * step);
        result.max_relative_error =
            std::max(result.max_relative_error, relative_error(grad.data()[i], fd));
    }
    return result;
}

LossSelfCheck run_loss_self_check(std::uint64_t seed, std::size_t cases) {
    std::mt19937_64 rng(seed);
    LossSelfCheck out;
    constexpr int H = 8, W = 8, C = 4;
    const std::size_t n = static_cast<std::size_t>(H) * W * C;

    // Constant residual, half foreground, lambda 0.2 -> 0.5*0.8 + 0.5*0.2.
    {
        std::vector<double> half(static_cast<std::size_t>(H) * W, 0.0);
        std::fill(half.begin(), half.begin() + static_cast<std::ptrdiff_t>(half.size() / 2), 1.0);
        const SoftMask m(W, H, half);
        const ResidualMap ones(H, W, C, std::vector<double>(n, 1.0));
        out.worst_closed_form_error =
            std::max(out.worst_closed_form_error, std::abs(mrl(ones, m, MrlParams(0.2)) - 0.5));
    }
    // lambda 0.5 halves the mean; mask == 1 with lambda 1 gives the mean;
    // lambda 0 on a binary mask sees background only.
    {
        const Tensor a = random_tensor(rng, H, W, C, -1.0, 1.0);
        const Tensor b = random_tensor(rng, H, W, C, -1.0, 1.0);
        const ResidualMap r = residual_map(a, b);
        double mean = 0.0;
        for (double v : r.data()) mean += v;
        mean /= static_cast<double>(n);
        const SoftMask soft = random_mask(rng, H, W, false);
        const SoftMask binary = random_mask(rng, H, W, true);
        double bg = 0.0;
        for (int p = 0; p < H * W; ++p) {
            if (binary.data()[p] == 0.0) {
                for (int c = 0; c < C; ++c) bg += r.data()[static_cast<std::size_t>(p) * C + c];
            }
        }
        bg /= static_cast<double>(n);
        const double errs[] = {
            std::abs(mrl(r, soft, MrlParams(0.5)) - 0.5 * mean),
            std::abs(mrl(r, SoftMask::constant(W, H, 1.0), MrlParams(1.0)) - mean),
            std::abs(mrl(r, binary, MrlParams(0.0)) - bg),
        };
        for (double e : errs) out.worst_closed_form_error = std::max(out.worst_closed_form_error, e);

        const double l0 = mrl(r, soft, MrlParams(0.0));
        const double l1 = mrl(r, soft, MrlParams(1.0));
        for (double lambda : ablation_lambdas()) {
            const double affine = l0 + lambda * (l1 - l0);
            out.worst_affine_error =
                std::max(out.worst_affine_error, std::abs(mrl(r, soft, MrlParams(lambda)) - affine));
        }
    }

    for (std::size_t k = 0; k < cases; ++k) {
        const Tensor pred = random_tensor(rng, H, W, C, -1.0, 1.0);
        const Tensor target = random_tensor(rng, H, W, C, -1.0, 1.0);
        const SoftMask mask = random_mask(rng, H, W, false);
        const MrlParams params(uniform01(rng));
        const auto check = check_mrl_gradient(pred, target, mask, params);
        out.worst_gradient_error = std::max(out.worst_gradient_error, check.max_relative_error);
        ++out.gradient_cases;
    }

    const auto lambdas = ablation_lambdas();
    out.sweep = lambda_sweep(RegionResiduals{1.0, 0.0, 0.5}, lambdas);

    out.passed = out.worst_gradient_error < 1e-5 && out.worst_closed_form_error <= 1e-12 &&
                 out.worst_affine_error <= 1e-10;
    return out;
}

}  // namespace lumikit
