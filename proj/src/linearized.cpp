// SPDX-License-Identifier: Apache-2.0
#include "allee/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace allee {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct Linearization {
    const TransportOperator& op;
    std::vector<double> fprime;
    SpMat s;
    double scale = 1.0;

    double rayleigh(const Eigen::VectorXd& y) const {
        double num = op.energy(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
        for (Eigen::Index i = 0; i < y.size(); ++i) num += fprime[static_cast<std::size_t>(i)] * y[i] * y[i];
        return num / y.squaredNorm();
    }

    double residual(const Eigen::VectorXd& y, double lambda) const {
        return (s * y - lambda * y).norm() / y.norm();
    }
};

Eigen::VectorXd start_vector(Eigen::Index n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * dist(rng);
    return v.normalized();
}

void orthogonalize(Eigen::VectorXd& y, const std::vector<Eigen::VectorXd>& basis) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) y -= b.dot(y) * b;
    }
}

std::vector<std::pair<double, Eigen::VectorXd>> tridiagonal_path(const Linearization& lin, int count) {
    const Eigen::Index n = lin.s.rows();
    Eigen::VectorXd diag(n), sub(n - 1);
    for (Eigen::Index i = 0; i < n; ++i) diag[i] = lin.s.coeff(i, i);
    for (Eigen::Index i = 0; i + 1 < n; ++i) sub[i] = lin.s.coeff(i + 1, i);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (tri.info() != Eigen::Success) throw std::runtime_error("tridiagonal eigenvalue iteration failed");

    std::vector<std::pair<double, Eigen::VectorXd>> out;
    std::vector<Eigen::VectorXd> found;
    SpMat id(n, n);
    id.setIdentity();
    for (int j = 0; j < count; ++j) {
        const double estimate = tri.eigenvalues()[n - 1 - j];
        const double shift = estimate + 1e-10 * std::max(1.0, std::abs(estimate));
        SpMat shifted = lin.s - shift * id;
        shifted.makeCompressed();
        Eigen::SparseLU<SpMat> lu;
        lu.compute(shifted);
        if (lu.info() != Eigen::Success) throw std::runtime_error("shifted factorisation failed");
        Eigen::VectorXd y = start_vector(n, 17u + static_cast<unsigned>(j));
        orthogonalize(y, found);
        double lambda = estimate, res = 0.0;
        for (int it = 0; it < 8; ++it) {
            y = lu.solve(y);
            orthogonalize(y, found);
            y.normalize();
            lambda = lin.rayleigh(y);
            res = lin.residual(y, lambda);
            if (it >= 2 && res <= 1e-10 * lin.scale) break;
        }
        if (!(res <= 1e-8 * lin.scale)) {
            std::ostringstream msg;
            msg << "inverse iteration did not converge for eigenvalue " << j << ", residual " << res;
            throw std::runtime_error(msg.str());
        }
        found.push_back(y);
        out.emplace_back(lambda, y);
    }
    return out;
}

std::vector<std::pair<double, Eigen::VectorXd>> subspace_path(const Linearization& lin, int count) {
    const Eigen::Index n = lin.s.rows();
    const Eigen::Index block = std::min<Eigen::Index>(n, count + 4);
    const double fmax = *std::max_element(lin.fprime.begin(), lin.fprime.end());
    const double sigma = fmax + 0.05 * (1.0 + std::abs(fmax));
    SpMat id(n, n);
    id.setIdentity();
    SpMat shifted = sigma * id - lin.s;
    Eigen::SimplicialLDLT<SpMat> ldlt;
    ldlt.compute(shifted);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("shift-invert factorisation failed");

    Eigen::MatrixXd x(n, block);
    for (Eigen::Index c = 0; c < block; ++c) x.col(c) = start_vector(n, 101u + static_cast<unsigned>(c));
    Eigen::VectorXd values;
    double worst = 0.0;
    for (int it = 0; it < 3000; ++it) {
        Eigen::MatrixXd y = ldlt.solve(x);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, block);
        Eigen::MatrixXd sq = lin.s * q;
        Eigen::MatrixXd h = q.transpose() * sq;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(0.5 * (h + h.transpose()));
        x = q * ritz.eigenvectors();
        values = ritz.eigenvalues();
        worst = 0.0;
        for (int j = 0; j < count; ++j) {
            const Eigen::Index c = block - 1 - j;
            worst = std::max(worst, lin.residual(x.col(c), values[c]));
        }
        if (worst <= 1e-9 * lin.scale) break;
    }
    if (!(worst <= 1e-8 * lin.scale)) {
        std::ostringstream msg;
        msg << "subspace iteration did not converge, residual " << worst;
        throw std::runtime_error(msg.str());
    }
    std::vector<std::pair<double, Eigen::VectorXd>> out;
    for (int j = 0; j < count; ++j) {
        const Eigen::VectorXd y = x.col(block - 1 - j);
        out.emplace_back(lin.rayleigh(y), y);
    }
    return out;
}

}  // namespace

std::vector<EigenPair> linearized_leading_eigen(const Grid& grid, const Potential& potential, double chi, double d,
                                                const ReactionSpec& reaction, std::span<const double> steady, int count) {
    if (steady.size() != grid.size()) throw std::invalid_argument("steady field size does not match the grid");
    if (count < 1 || static_cast<std::size_t>(count) > grid.size()) throw std::invalid_argument("bad eigenvalue count");
    const TransportOperator op(grid, potential, chi, d);
    const std::vector<double> r =
        grid.sample([&](std::span<const double> x) { return reaction.resource(potential, x); });

    Linearization lin{op, reaction_derivative(reaction, steady, r), op.symmetric_matrix()};
    for (Eigen::Index i = 0; i < lin.s.rows(); ++i) lin.s.coeffRef(i, i) += lin.fprime[static_cast<std::size_t>(i)];
    lin.s.makeCompressed();
    lin.scale = 0.0;
    for (Eigen::Index c = 0; c < lin.s.outerSize(); ++c) {
        double col = 0.0;
        for (SpMat::InnerIterator it(lin.s, c); it; ++it) col += std::abs(it.value());
        lin.scale = std::max(lin.scale, col);
    }

    auto pairs = grid.dimension() == 1 ? tridiagonal_path(lin, count) : subspace_path(lin, count);
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    const std::vector<double> w = op.equilibrium();
    std::vector<EigenPair> out;
    for (auto& [lambda, y] : pairs) {
        EigenPair e;
        e.value = lambda;
        e.residual = lin.residual(y, lambda);
        e.vector.resize(w.size());
        double peak = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            e.vector[i] = std::sqrt(w[i]) * y[static_cast<Eigen::Index>(i)];
            if (std::abs(e.vector[i]) > std::abs(peak)) peak = e.vector[i];
        }
        if (peak != 0.0) {
            for (double& v : e.vector) v /= peak;
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace allee
