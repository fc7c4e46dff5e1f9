// SPDX-License-Identifier: Apache-2.0
#include "impl.hpp"

#include <algorithm>
#include <cmath>

namespace allee::kernels::scalar {

void tridiagonal_apply(const double* lower, const double* diag, const double* upper, const double* x, double* y,
                       std::size_t n) {
    if (n == 0) return;
    if (n == 1) {
        y[0] = diag[0] * x[0];
        return;
    }
    y[0] = diag[0] * x[0] + upper[0] * x[1];
    for (std::size_t i = 1; i + 1 < n; ++i) y[i] = lower[i] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1];
    y[n - 1] = lower[n - 1] * x[n - 2] + diag[n - 1] * x[n - 1];
}

void stencil5_apply(std::size_t nx, std::size_t ny, const double* diag, const double* west, const double* east,
                    const double* south, const double* north, const double* x, double* y) {
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t k = j * nx + i;
            double acc = diag[k] * x[k];
            if (i > 0) acc += west[k] * x[k - 1];
            if (i + 1 < nx) acc += east[k] * x[k + 1];
            if (j > 0) acc += south[k] * x[k - nx];
            if (j + 1 < ny) acc += north[k] * x[k + nx];
            y[k] = acc;
        }
    }
}

double cubic_reaction(const double* u, double mu, double theta, double* f, std::size_t n) {
    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = u[i];
        f[i] = mu * v * (1.0 - v) * (v - theta);
        slope = std::max(slope, std::abs(mu * (-3.0 * v * v + 2.0 * (1.0 + theta) * v - theta)));
    }
    return slope;
}

double logistic_reaction(const double* u, const double* r, double theta, double* f, std::size_t n) {
    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = u[i];
        f[i] = v * (v - theta) * (r[i] - v);
        slope = std::max(slope, std::abs(-3.0 * v * v + 2.0 * (r[i] + theta) * v - theta * r[i]));
    }
    return slope;
}

double shared_reaction(const double* u, const double* v, const double* r, double theta, double* fu, double* fv,
                       std::size_t n) {
    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = u[i] + v[i];
        const double g = (w - theta) * (r[i] - w);
        const double dg = r[i] + theta - 2.0 * w;
        fu[i] = u[i] * g;
        fv[i] = v[i] * g;
        const double ru = std::abs(g + u[i] * dg) + std::abs(u[i] * dg);
        const double rv = std::abs(g + v[i] * dg) + std::abs(v[i] * dg);
        slope = std::max(slope, std::max(ru, rv));
    }
    return slope;
}

void explicit_update(const double* u, const double* f, double dt, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = u[i] + dt * f[i];
}

FieldStats field_stats(const double* u, std::size_t n) {
    FieldStats s;
    if (n == 0) return s;
    s.max = s.min = u[0];
    for (std::size_t i = 0; i < n; ++i) {
        s.sum += u[i];
        s.max = std::max(s.max, u[i]);
        s.min = std::min(s.min, u[i]);
    }
    return s;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace allee::kernels::scalar
