#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "lumikit/embed.hpp"
#include "lumikit/errors.hpp"

namespace lumikit {

namespace {

// Flip so the largest-magnitude coordinate (first on ties) is positive.
void normalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        if (std::abs(v(i)) > std::abs(v(best))) best = i;
    }
    if (v(best) < 0.0) v = -v;
}

// Completes `basis` (orthonormal columns 0..filled-1) with Gram-Schmidt on
// the standard basis.
void complete_basis(Eigen::MatrixXd& basis, Eigen::Index filled) {
    const Eigen::Index dim = basis.rows();
    for (Eigen::Index e = 0; e < dim && filled < basis.cols(); ++e) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(dim, e);
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index c = 0; c < filled; ++c) v -= basis.col(c).dot(v) * basis.col(c);
        }
        const double n = v.norm();
        if (n > 1e-6) basis.col(filled++) = v / n;
    }
}

}  // namespace

PcaResult pca_project(const Eigen::MatrixXd& data, int out_dims) {
    const Eigen::Index n = data.rows();
    const Eigen::Index dim = data.cols();
    if (out_dims < 1 || out_dims > std::min<Eigen::Index>(dim, n - 1)) {
        throw ValidationError("PCA output dims " + std::to_string(out_dims) +
                              " must lie in [1, min(dim, items - 1)] = [1, " +
                              std::to_string(std::min<Eigen::Index>(dim, n - 1)) + "]");
    }
    PcaResult out;
    out.mean = data.colwise().mean().transpose();
    const Eigen::MatrixXd centered = data.rowwise() - out.mean.transpose();
    const double total = centered.squaredNorm() / static_cast<double>(n - 1);
    if (!(total > 0.0)) throw DegenerateError("PCA input has zero variance (all vectors identical)");

    // Eigen-decompose the smaller of the covariance (dim x dim) and Gram (n x n) matrices.
    Eigen::MatrixXd directions(dim, out_dims);
    std::vector<double> eig(static_cast<std::size_t>(out_dims));
    Eigen::Index filled = 0;
    const double rank_floor = total * 1e-12;
    if (dim <= n) {
        const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
        if (solver.info() != Eigen::Success) throw DegenerateError("covariance eigensolver failed");
        for (int k = 0; k < out_dims; ++k) {
            const Eigen::Index idx = dim - 1 - k;
            eig[k] = std::max(0.0, solver.eigenvalues()(idx));
            directions.col(k) = solver.eigenvectors().col(idx);
        }
        filled = out_dims;
    } else {
        const Eigen::MatrixXd gram = centered * centered.transpose() / static_cast<double>(n - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
        if (solver.info() != Eigen::Success) throw DegenerateError("Gram eigensolver failed");
        for (int k = 0; k < out_dims; ++k) {
            const Eigen::Index idx = n - 1 - k;
            const double lambda = std::max(0.0, solver.eigenvalues()(idx));
            eig[k] = lambda;
            if (lambda <= rank_floor) continue;
            Eigen::VectorXd v = centered.transpose() * solver.eigenvectors().col(idx);
            directions.col(filled++) = v / v.norm();
        }
        for (int k = static_cast<int>(filled); k < out_dims; ++k) eig[k] = 0.0;
    }
    complete_basis(directions, filled);
    for (int k = 0; k < out_dims; ++k) normalize_sign(directions.col(k));

    out.directions = directions;
    out.projections = centered * directions;
    out.eigenvalues = eig;
    for (double e : eig) out.explained_variance_ratio.push_back(std::clamp(e / total, 0.0, 1.0));
    return out;
}

PcaResult pca_project(const EmbeddingSet& set, int out_dims) {
    return pca_project(set.matrix(), out_dims);
}

}  // namespace lumikit
