// SPDX-License-Identifier: Apache-2.0
#include "impl.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace allee::kernels::avx2 {

namespace {

inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

inline double hmax(__m256d v) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, v);
    return std::max(std::max(lane[0], lane[1]), std::max(lane[2], lane[3]));
}

inline double hmin(__m256d v) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, v);
    return std::min(std::min(lane[0], lane[1]), std::min(lane[2], lane[3]));
}

inline double hsum(__m256d v) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, v);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

void tridiagonal_apply(const double* lower, const double* diag, const double* upper, const double* x, double* y,
                       std::size_t n) {
    if (n < 3) {
        scalar::tridiagonal_apply(lower, diag, upper, x, y, n);
        return;
    }
    y[0] = diag[0] * x[0] + upper[0] * x[1];
    std::size_t i = 1;
    for (; i + 4 < n; i += 4) {
        __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(diag + i), _mm256_loadu_pd(x + i));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(lower + i), _mm256_loadu_pd(x + i - 1), acc);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(upper + i), _mm256_loadu_pd(x + i + 1), acc);
        _mm256_storeu_pd(y + i, acc);
    }
    for (; i + 1 < n; ++i) y[i] = lower[i] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1];
    y[n - 1] = lower[n - 1] * x[n - 2] + diag[n - 1] * x[n - 1];
}

void stencil5_apply(std::size_t nx, std::size_t ny, const double* diag, const double* west, const double* east,
                    const double* south, const double* north, const double* x, double* y) {
    auto edge = [&](std::size_t i, std::size_t j) {
        const std::size_t k = j * nx + i;
        double acc = diag[k] * x[k];
        if (i > 0) acc += west[k] * x[k - 1];
        if (i + 1 < nx) acc += east[k] * x[k + 1];
        if (j > 0) acc += south[k] * x[k - nx];
        if (j + 1 < ny) acc += north[k] * x[k + nx];
        y[k] = acc;
    };
    for (std::size_t j = 0; j < ny; ++j) {
        const bool has_south = j > 0, has_north = j + 1 < ny;
        edge(0, j);
        std::size_t i = 1;
        for (; i + 4 < nx; i += 4) {
            const std::size_t k = j * nx + i;
            __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(diag + k), _mm256_loadu_pd(x + k));
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(west + k), _mm256_loadu_pd(x + k - 1), acc);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(east + k), _mm256_loadu_pd(x + k + 1), acc);
            if (has_south) acc = _mm256_fmadd_pd(_mm256_loadu_pd(south + k), _mm256_loadu_pd(x + k - nx), acc);
            if (has_north) acc = _mm256_fmadd_pd(_mm256_loadu_pd(north + k), _mm256_loadu_pd(x + k + nx), acc);
            _mm256_storeu_pd(y + k, acc);
        }
        for (; i < nx; ++i) edge(i, j);
    }
}

double cubic_reaction(const double* u, double mu, double theta, double* f, std::size_t n) {
    const __m256d vmu = _mm256_set1_pd(mu), vth = _mm256_set1_pd(theta), one = _mm256_set1_pd(1.0);
    const __m256d m3 = _mm256_set1_pd(-3.0), two_t = _mm256_set1_pd(2.0 * (1.0 + theta));
    __m256d slope = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(u + i);
        const __m256d val =
            _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(vmu, v), _mm256_sub_pd(one, v)), _mm256_sub_pd(v, vth));
        _mm256_storeu_pd(f + i, val);
        const __m256d d = _mm256_mul_pd(vmu, _mm256_fmsub_pd(v, _mm256_fmadd_pd(m3, v, two_t), vth));
        slope = _mm256_max_pd(slope, vabs(d));
    }
    double s = hmax(slope);
    if (i < n) s = std::max(s, scalar::cubic_reaction(u + i, mu, theta, f + i, n - i));
    return s;
}

double logistic_reaction(const double* u, const double* r, double theta, double* f, std::size_t n) {
    const __m256d vth = _mm256_set1_pd(theta), m3 = _mm256_set1_pd(-3.0), two = _mm256_set1_pd(2.0);
    __m256d slope = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(u + i);
        const __m256d rr = _mm256_loadu_pd(r + i);
        _mm256_storeu_pd(f + i, _mm256_mul_pd(_mm256_mul_pd(v, _mm256_sub_pd(v, vth)), _mm256_sub_pd(rr, v)));
        const __m256d lin = _mm256_mul_pd(two, _mm256_add_pd(rr, vth));
        const __m256d d = _mm256_fmsub_pd(v, _mm256_fmadd_pd(m3, v, lin), _mm256_mul_pd(vth, rr));
        slope = _mm256_max_pd(slope, vabs(d));
    }
    double s = hmax(slope);
    if (i < n) s = std::max(s, scalar::logistic_reaction(u + i, r + i, theta, f + i, n - i));
    return s;
}

double shared_reaction(const double* u, const double* v, const double* r, double theta, double* fu, double* fv,
                       std::size_t n) {
    const __m256d vth = _mm256_set1_pd(theta), m2 = _mm256_set1_pd(-2.0);
    __m256d slope = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d uu = _mm256_loadu_pd(u + i);
        const __m256d vv = _mm256_loadu_pd(v + i);
        const __m256d rr = _mm256_loadu_pd(r + i);
        const __m256d w = _mm256_add_pd(uu, vv);
        const __m256d g = _mm256_mul_pd(_mm256_sub_pd(w, vth), _mm256_sub_pd(rr, w));
        const __m256d dg = _mm256_fmadd_pd(m2, w, _mm256_add_pd(rr, vth));
        _mm256_storeu_pd(fu + i, _mm256_mul_pd(uu, g));
        _mm256_storeu_pd(fv + i, _mm256_mul_pd(vv, g));
        const __m256d udg = _mm256_mul_pd(uu, dg), vdg = _mm256_mul_pd(vv, dg);
        const __m256d ru = _mm256_add_pd(vabs(_mm256_add_pd(g, udg)), vabs(udg));
        const __m256d rv = _mm256_add_pd(vabs(_mm256_add_pd(g, vdg)), vabs(vdg));
        slope = _mm256_max_pd(slope, _mm256_max_pd(ru, rv));
    }
    double s = hmax(slope);
    if (i < n) s = std::max(s, scalar::shared_reaction(u + i, v + i, r + i, theta, fu + i, fv + i, n - i));
    return s;
}

void explicit_update(const double* u, const double* f, double dt, double* out, std::size_t n) {
    const __m256d vdt = _mm256_set1_pd(dt);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vdt, _mm256_loadu_pd(f + i), _mm256_loadu_pd(u + i)));
    }
    for (; i < n; ++i) out[i] = u[i] + dt * f[i];
}

FieldStats field_stats(const double* u, std::size_t n) {
    if (n < 4) return scalar::field_stats(u, n);
    __m256d sum = _mm256_setzero_pd();
    __m256d mx = _mm256_loadu_pd(u), mn = mx;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(u + i);
        sum = _mm256_add_pd(sum, v);
        mx = _mm256_max_pd(mx, v);
        mn = _mm256_min_pd(mn, v);
    }
    FieldStats s{hsum(sum), hmax(mx), hmin(mn)};
    for (; i < n; ++i) {
        s.sum += u[i];
        s.max = std::max(s.max, u[i]);
        s.min = std::min(s.min, u[i]);
    }
    return s;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
    double s = hmax(m);
    for (; i < n; ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

}  // namespace allee::kernels::avx2
