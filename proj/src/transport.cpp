// SPDX-License-Identifier: Apache-2.0
#include "allee/kernels.hpp"
#include "allee/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace allee {

double bernoulli(double x) {
    if (std::abs(x) < 1e-5) return 1.0 - x / 2.0 + x * x / 12.0;
    return x / std::expm1(x);
}

namespace {

/// B(v)·e^{v/2} = (v/2)/sinh(v/2), even in v.
double symmetric_coupling(double v) {
    const double h = 0.5 * v;
    if (std::abs(h) < 1e-8) return 1.0;
    return h / std::sinh(h);
}

}  // namespace

TransportOperator::TransportOperator(const Grid& grid, const Potential& potential, double chi, double d)
    : grid_(grid), chi_(chi), d_(d) {
    if (grid.dimension() != potential.dimension()) throw std::invalid_argument("grid and potential dimensions differ");
    if (!(chi >= 0.0) || !std::isfinite(chi)) throw std::invalid_argument("chi must be finite and non-negative");
    if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("diffusion must be positive");
    a_ = grid.sample([&](std::span<const double> x) { return potential.value(x); });
    for (double a : a_) {
        if (!std::isfinite(a)) throw std::invalid_argument("potential sample is not finite");
    }
    a_max_ = *std::max_element(a_.begin(), a_.end());
    phi_.resize(a_.size());
    for (std::size_t i = 0; i < a_.size(); ++i) phi_[i] = chi * (a_[i] - a_max_) / d;

    const std::size_t n = grid.size();
    diag_.assign(n, 0.0);
    west_.assign(n, 0.0);
    east_.assign(n, 0.0);
    south_.assign(n, 0.0);
    north_.assign(n, 0.0);

    const auto nx = static_cast<std::size_t>(grid.cells(0));
    const auto ny = grid.dimension() == 2 ? static_cast<std::size_t>(grid.cells(1)) : std::size_t{1};
    const double kx = d / (grid.spacing(0) * grid.spacing(0));
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            const std::size_t p = j * nx + i, q = p + 1;
            add_face(p, q, kx, phi_[q] - phi_[p], east_, west_);
        }
    }
    if (grid.dimension() == 2) {
        const double ky = d / (grid.spacing(1) * grid.spacing(1));
        for (std::size_t j = 0; j + 1 < ny; ++j) {
            for (std::size_t i = 0; i < nx; ++i) {
                const std::size_t p = j * nx + i, q = p + nx;
                add_face(p, q, ky, phi_[q] - phi_[p], north_, south_);
            }
        }
    }
}

void TransportOperator::add_face(std::size_t p, std::size_t q, double k, double v, std::vector<double>& fwd,
                                 std::vector<double>& back) {
    const double bp = bernoulli(v), bm = bernoulli(-v);
    fwd[p] = k * bp;
    diag_[p] -= k * bm;
    back[q] = k * bm;
    diag_[q] -= k * bp;
    faces_.push_back({p, q, k, v});
}

void TransportOperator::apply(std::span<const double> x, std::span<double> y) const {
    if (grid_.dimension() == 1) {
        kernels::tridiagonal_apply(west_, diag_, east_, x, y);
    } else {
        kernels::stencil5_apply(static_cast<std::size_t>(grid_.cells(0)), static_cast<std::size_t>(grid_.cells(1)), diag_,
                                west_, east_, south_, north_, x, y);
    }
}

void TransportOperator::apply_conservative(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = diag_.size();
    if (x.size() != n || y.size() != n) throw std::invalid_argument("field size does not match the operator");
    const auto nx = static_cast<std::size_t>(grid_.cells(0));
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t p = 0; p < n; ++p) {
        if ((p + 1) % nx != 0) {
            const double flux = east_[p] * x[p + 1] - west_[p + 1] * x[p];
            y[p] += flux;
            y[p + 1] -= flux;
        }
        if (grid_.dimension() == 2 && p + nx < n) {
            const double flux = north_[p] * x[p + nx] - south_[p + nx] * x[p];
            y[p] += flux;
            y[p + nx] -= flux;
        }
    }
}

std::vector<double> TransportOperator::column_sums() const {
    const std::size_t n = diag_.size();
    const auto nx = static_cast<std::size_t>(grid_.cells(0));
    std::vector<double> sums(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = diag_[j];
        const std::size_t i = j % nx;
        if (i > 0) s += east_[j - 1];
        if (i + 1 < nx) s += west_[j + 1];
        if (grid_.dimension() == 2) {
            if (j >= nx) s += north_[j - nx];
            if (j + nx < n) s += south_[j + nx];
        }
        sums[j] = s;
    }
    return sums;
}

std::vector<double> TransportOperator::equilibrium() const {
    std::vector<double> w(a_.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(phi_[i]);
    return w;
}

double TransportOperator::norm_inf() const {
    double m = 0.0;
    for (std::size_t i = 0; i < diag_.size(); ++i) {
        m = std::max(m, std::abs(diag_[i]) + std::abs(west_[i]) + std::abs(east_[i]) + std::abs(south_[i]) +
                            std::abs(north_[i]));
    }
    return m;
}

Eigen::SparseMatrix<double> TransportOperator::matrix() const {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(diag_.size() + 2 * faces_.size());
    for (std::size_t i = 0; i < diag_.size(); ++i) t.emplace_back(static_cast<int>(i), static_cast<int>(i), diag_[i]);
    for (const Face& f : faces_) {
        t.emplace_back(static_cast<int>(f.p), static_cast<int>(f.q), f.k * bernoulli(f.v));
        t.emplace_back(static_cast<int>(f.q), static_cast<int>(f.p), f.k * bernoulli(-f.v));
    }
    const auto n = static_cast<Eigen::Index>(diag_.size());
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

Eigen::SparseMatrix<double> TransportOperator::symmetric_matrix() const {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(diag_.size() + 2 * faces_.size());
    for (std::size_t i = 0; i < diag_.size(); ++i) t.emplace_back(static_cast<int>(i), static_cast<int>(i), diag_[i]);
    for (const Face& f : faces_) {
        const double s = f.k * symmetric_coupling(f.v);
        t.emplace_back(static_cast<int>(f.p), static_cast<int>(f.q), s);
        t.emplace_back(static_cast<int>(f.q), static_cast<int>(f.p), s);
    }
    const auto n = static_cast<Eigen::Index>(diag_.size());
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

double TransportOperator::energy(std::span<const double> y) const {
    double e = 0.0;
    for (const Face& f : faces_) {
        const double diff = std::sqrt(bernoulli(f.v)) * y[f.q] - std::sqrt(bernoulli(-f.v)) * y[f.p];
        e -= f.k * diff * diff;
    }
    return e;
}

TransportOperator assemble_transport(const Grid& grid, const Potential& potential, double chi, double d) {
    return TransportOperator(grid, potential, chi, d);
}

}  // namespace allee
