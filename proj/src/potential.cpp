// SPDX-License-Identifier: Apache-2.0
#include "allee/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace allee {

namespace {

constexpr double kGradientTol = 1e-12;
constexpr double kDegenerateTol = 1e-8;
constexpr double kMergeTol = 1e-8;

void check_dimension(int dim) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("potential dimension must be 1 or 2");
}

void add_gaussian(const GaussianBump& b, int dim, std::span<const double> x, Jet& jet) {
    const double inv_w2 = 1.0 / (b.width * b.width);
    double r2 = 0.0;
    Vec2 dx{0.0, 0.0};
    for (int i = 0; i < dim; ++i) {
        dx[i] = x[i] - b.center[i];
        r2 += dx[i] * dx[i];
    }
    const double g = b.amplitude * std::exp(-r2 * inv_w2);
    jet.value += g;
    for (int i = 0; i < dim; ++i) {
        jet.gradient[i] += -2.0 * dx[i] * inv_w2 * g;
        for (int j = 0; j < dim; ++j) {
            const double delta = i == j ? 1.0 : 0.0;
            jet.hessian[i][j] += g * (4.0 * dx[i] * dx[j] * inv_w2 * inv_w2 - 2.0 * delta * inv_w2);
        }
    }
}

/// Symmetric 2x2 eigensolve, descending eigenvalues.
void symmetric_eigen(const Mat2& m, Vec2& values, Mat2& vectors) {
    const double a = m[0][0], b = m[0][1], c = m[1][1];
    const double mean = 0.5 * (a + c);
    const double radius = std::hypot(0.5 * (a - c), b);
    values = {mean + radius, mean - radius};
    const double phi = 0.5 * std::atan2(2.0 * b, a - c);
    vectors[0] = {std::cos(phi), std::sin(phi)};
    vectors[1] = {-std::sin(phi), std::cos(phi)};
}

double norm(const Vec2& v, int dim) { return dim == 1 ? std::abs(v[0]) : std::hypot(v[0], v[1]); }

double hessian_scale(const Mat2& h, int dim) {
    if (dim == 1) return std::abs(h[0][0]);
    return std::sqrt(h[0][0] * h[0][0] + 2.0 * h[0][1] * h[0][1] + h[1][1] * h[1][1]);
}

bool inside(const Box& box, const Vec2& p, double slack) {
    for (int i = 0; i < box.dim; ++i) {
        const double span = box.upper[i] - box.lower[i];
        if (p[i] < box.lower[i] - slack * span || p[i] > box.upper[i] + slack * span) return false;
    }
    return true;
}

CriticalPoint classify(const Potential& pot, const Vec2& p) {
    const int dim = pot.dimension();
    const Jet jet = pot.jet(std::span<const double>(p.data(), dim));
    CriticalPoint cp;
    cp.location = p;
    cp.value = jet.value;
    cp.laplacian = jet.laplacian(dim);
    cp.gradient_norm = norm(jet.gradient, dim);
    Vec2 eig{0.0, 0.0};
    if (dim == 1) {
        eig = {jet.hessian[0][0], 0.0};
        cp.axes = {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
    } else {
        symmetric_eigen(jet.hessian, eig, cp.axes);
    }
    bool all_negative = true;
    for (int i = 0; i < dim; ++i) {
        cp.h[i] = -eig[i];
        if (std::abs(eig[i]) < kDegenerateTol) cp.degenerate = true;
        if (!(eig[i] < 0.0)) all_negative = false;
    }
    cp.kind = (all_negative && !cp.degenerate) ? CriticalKind::maximum : CriticalKind::other;
    return cp;
}

bool converged(const Jet& jet, int dim) {
    return norm(jet.gradient, dim) <= kGradientTol * std::max(1.0, hessian_scale(jet.hessian, dim));
}

/// Safeguarded Newton on A'(x) = 0 inside a sign-change bracket.
bool refine_bracket_1d(const Potential& pot, double a, double b, double& root) {
    auto slope = [&](double x) { return pot.jet(std::span<const double>(&x, 1)); };
    Jet ja = slope(a);
    double x = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        const Jet j = slope(x);
        if (converged(j, 1)) {
            root = x;
            return true;
        }
        if ((j.gradient[0] < 0.0) == (ja.gradient[0] < 0.0)) {
            a = x;
            ja = j;
        } else {
            b = x;
        }
        double next = x;
        if (j.hessian[0][0] != 0.0) next = x - j.gradient[0] / j.hessian[0][0];
        if (!(next > std::min(a, b) && next < std::max(a, b))) next = 0.5 * (a + b);
        if (std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
            root = x;
            return converged(slope(x), 1);
        }
        x = next;
    }
    root = x;
    return false;
}

bool damped_newton_2d(const Potential& pot, const Box& box, Vec2 x, Vec2& root) {
    auto at = [&](const Vec2& p) { return pot.jet(std::span<const double>(p.data(), 2)); };
    Jet j = at(x);
    for (int it = 0; it < 100; ++it) {
        if (converged(j, 2)) {
            root = x;
            return true;
        }
        const Mat2& h = j.hessian;
        const double det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        Vec2 step{-j.gradient[0], -j.gradient[1]};
        if (std::abs(det) > 1e-300) {
            step = {-(h[1][1] * j.gradient[0] - h[0][1] * j.gradient[1]) / det,
                    -(-h[1][0] * j.gradient[0] + h[0][0] * j.gradient[1]) / det};
        }
        const double g0 = norm(j.gradient, 2);
        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            const Vec2 trial{x[0] + alpha * step[0], x[1] + alpha * step[1]};
            const Jet jt = at(trial);
            if (norm(jt.gradient, 2) < g0 || converged(jt, 2)) {
                x = trial;
                j = jt;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted || !inside(box, x, 0.05)) break;
    }
    root = x;
    return converged(j, 2);
}

void merge_into(std::vector<CriticalPoint>& points, const CriticalPoint& cp, int dim) {
    for (const auto& p : points) {
        Vec2 d{p.location[0] - cp.location[0], p.location[1] - cp.location[1]};
        if (norm(d, dim) < kMergeTol) return;
    }
    points.push_back(cp);
}

}  // namespace

Potential::Potential(int dim, GaussianSum form) : dim_(dim), form_(std::move(form)) {
    check_dimension(dim);
    for (const auto& b : std::get<GaussianSum>(form_).bumps) {
        if (!(b.width > 0.0)) throw std::invalid_argument("gaussian width must be positive");
    }
}

Potential::Potential(int dim, QuadraticPeak form) : dim_(dim), form_(form) {
    check_dimension(dim);
    for (int i = 0; i < dim; ++i) {
        if (!(form.curvature[i] > 0.0)) throw std::invalid_argument("quadratic curvature must be positive");
    }
}

Jet Potential::jet(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) {
        throw std::invalid_argument("point dimension " + std::to_string(x.size()) +
                                    " does not match potential dimension " + std::to_string(dim_));
    }
    for (double xi : x) {
        if (!std::isfinite(xi)) throw std::invalid_argument("point is not finite");
    }
    Jet jet;
    if (const auto* g = std::get_if<GaussianSum>(&form_)) {
        jet.value = g->offset;
        for (const auto& b : g->bumps) add_gaussian(b, dim_, x, jet);
    } else {
        const auto& q = std::get<QuadraticPeak>(form_);
        jet.value = q.peak;
        for (int i = 0; i < dim_; ++i) {
            const double dx = x[i] - q.location[i];
            jet.value -= 0.5 * q.curvature[i] * dx * dx;
            jet.gradient[i] = -q.curvature[i] * dx;
            jet.hessian[i][i] = -q.curvature[i];
        }
    }
    return jet;
}

double Potential::value(std::span<const double> x) const { return jet(x).value; }

Jet evaluate_jet(const Potential& potential, std::span<const double> x) { return potential.jet(x); }

CriticalPointSearch find_critical_points(const Potential& pot, const Box& domain, int seeds_per_axis) {
    if (seeds_per_axis < 8) throw std::invalid_argument("seeds_per_axis must be at least 8");
    if (domain.dim != pot.dimension()) throw std::invalid_argument("domain and potential dimensions differ");
    for (int i = 0; i < domain.dim; ++i) {
        if (!(domain.upper[i] > domain.lower[i])) throw std::invalid_argument("degenerate domain");
    }

    CriticalPointSearch out;
    std::vector<CriticalPoint> found;
    const int dim = domain.dim;

    if (dim == 1) {
        const int samples = 8 * seeds_per_axis + 1;
        const double lo = domain.lower[0], hi = domain.upper[0];
        std::vector<double> xs(samples), gs(samples);
        for (int k = 0; k < samples; ++k) {
            xs[k] = k + 1 == samples ? hi : lo + (hi - lo) * k / (samples - 1);
            gs[k] = pot.jet(std::span<const double>(&xs[k], 1)).gradient[0];
        }
        for (int k = 0; k < samples; ++k) {
            if (gs[k] == 0.0) {
                merge_into(found, classify(pot, Vec2{xs[k], 0.0}), 1);
                continue;
            }
            if (k + 1 < samples && gs[k + 1] != 0.0 && (gs[k] < 0.0) != (gs[k + 1] < 0.0)) {
                double root = 0.0;
                if (refine_bracket_1d(pot, xs[k], xs[k + 1], root)) {
                    merge_into(found, classify(pot, Vec2{root, 0.0}), 1);
                } else {
                    out.diagnostics.push_back({Vec2{root, 0.0}, "Newton did not converge inside sign-change bracket"});
                }
            }
        }
    } else {
        const int samples = 4 * seeds_per_axis + 1;
        std::vector<double> gnorm(static_cast<size_t>(samples) * samples);
        auto coord = [&](int axis, int k) {
            return k + 1 == samples ? domain.upper[axis]
                                    : domain.lower[axis] + (domain.upper[axis] - domain.lower[axis]) * k / (samples - 1);
        };
        for (int j = 0; j < samples; ++j) {
            for (int i = 0; i < samples; ++i) {
                const Vec2 p{coord(0, i), coord(1, j)};
                const Jet jet = pot.jet(std::span<const double>(p.data(), 2));
                gnorm[static_cast<size_t>(j) * samples + i] = norm(jet.gradient, 2);
            }
        }
        for (int j = 1; j + 1 < samples; ++j) {
            for (int i = 1; i + 1 < samples; ++i) {
                const double g = gnorm[static_cast<size_t>(j) * samples + i];
                bool minimum = true, strict = false;
                for (int dj = -1; dj <= 1 && minimum; ++dj) {
                    for (int di = -1; di <= 1; ++di) {
                        if (di == 0 && dj == 0) continue;
                        const double n = gnorm[static_cast<size_t>(j + dj) * samples + i + di];
                        if (n < g) {
                            minimum = false;
                            break;
                        }
                        if (n > g) strict = true;
                    }
                }
                if (!minimum || !strict) continue;
                const Vec2 seed{coord(0, i), coord(1, j)};
                Vec2 root{};
                if (damped_newton_2d(pot, domain, seed, root) && inside(domain, root, 0.0)) {
                    merge_into(found, classify(pot, root), 2);
                } else {
                    out.diagnostics.push_back({seed, "damped Newton did not converge to an interior critical point"});
                }
            }
        }
    }

    for (const auto& cp : found) {
        if (!inside(domain, cp.location, 0.0)) continue;
        (cp.kind == CriticalKind::maximum ? out.maxima : out.others).push_back(cp);
    }
    std::stable_sort(out.maxima.begin(), out.maxima.end(),
                     [](const CriticalPoint& a, const CriticalPoint& b) { return a.value > b.value; });
    return out;
}

CriticalPointSearch find_maxima(const Potential& potential, const Box& domain, int seeds_per_axis) {
    CriticalPointSearch all = find_critical_points(potential, domain, seeds_per_axis);
    all.others.clear();
    return all;
}

HypothesisReport verify_hypotheses(const Potential& pot, const Box& domain, int samples_per_axis) {
    if (samples_per_axis < 64) throw std::invalid_argument("samples_per_axis must be at least 64");
    HypothesisReport report;
    const int dim = domain.dim;
    const int s = samples_per_axis;

    auto sample = [&](int axis, double t) { return domain.lower[axis] + (domain.upper[axis] - domain.lower[axis]) * t; };

    if (dim == 1) {
        for (int k = 0; k < s; ++k) {
            const double x = sample(0, static_cast<double>(k) / (s - 1));
            report.laplacian_bound = std::max(report.laplacian_bound, std::abs(pot.jet(std::span<const double>(&x, 1)).hessian[0][0]));
        }
    } else {
        for (int j = 0; j < s; ++j) {
            for (int i = 0; i < s; ++i) {
                const Vec2 p{sample(0, static_cast<double>(i) / (s - 1)), sample(1, static_cast<double>(j) / (s - 1))};
                const Jet jet = pot.jet(std::span<const double>(p.data(), 2));
                report.laplacian_bound = std::max(report.laplacian_bound, std::abs(jet.laplacian(2)));
            }
        }
    }

    const CriticalPointSearch search = find_critical_points(pot, domain, s);
    for (const auto& cp : search.others) {
        if (!(cp.laplacian > 0.0)) {
            report.h1_ok = false;
            report.violations.push_back({cp.location, cp.degenerate ? "degenerate critical point with non-positive Laplacian"
                                                                    : "critical point with non-positive Laplacian"});
        }
    }
    for (const auto& d : search.diagnostics) {
        report.violations.push_back({d.seed, "unresolved critical-point candidate: " + d.message});
    }

    auto check_boundary = [&](const Vec2& p, const Vec2& normal) {
        const Jet jet = pot.jet(std::span<const double>(p.data(), dim));
        double dn = 0.0;
        for (int i = 0; i < dim; ++i) dn += jet.gradient[i] * normal[i];
        if (!(dn < 0.0)) {
            report.h2_ok = false;
            report.violations.push_back({p, "outward normal derivative is non-negative"});
        }
    };
    if (dim == 1) {
        check_boundary(Vec2{domain.lower[0], 0.0}, Vec2{-1.0, 0.0});
        check_boundary(Vec2{domain.upper[0], 0.0}, Vec2{1.0, 0.0});
    } else {
        for (int k = 0; k < s; ++k) {
            const double t = (k + 0.5) / s;
            check_boundary(Vec2{domain.lower[0], sample(1, t)}, Vec2{-1.0, 0.0});
            check_boundary(Vec2{domain.upper[0], sample(1, t)}, Vec2{1.0, 0.0});
            check_boundary(Vec2{sample(0, t), domain.lower[1]}, Vec2{0.0, -1.0});
            check_boundary(Vec2{sample(0, t), domain.upper[1]}, Vec2{0.0, 1.0});
        }
    }
    return report;
}

}  // namespace allee
