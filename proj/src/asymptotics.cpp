// SPDX-License-Identifier: Apache-2.0
#include "allee/asymptotics.hpp"
#include "allee/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace allee {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_n(int n) {
    if (n != 1 && n != 2) throw std::invalid_argument("dimension must be 1 or 2");
}

/// x^{-n/2}
double inv_half_power(double x, int n) { return n == 2 ? 1.0 / x : 1.0 / std::sqrt(x); }

double half_power(double x, int n) { return n == 2 ? x : std::sqrt(x); }

/// Roots of a·s² − b·s + k with a > 0, larger first. Returns false when the discriminant is negative.
bool ordered_roots(double a, double b, double k, double& hi, double& lo, double& disc) {
    disc = b * b - 4.0 * a * k;
    if (disc < 0.0) return false;
    const double q = 0.5 * (b + std::copysign(std::sqrt(disc), b));
    if (q == 0.0) {
        hi = lo = 0.5 * b / a;
        return true;
    }
    const double r1 = q / a, r2 = k / q;
    hi = std::max(r1, r2);
    lo = std::min(r1, r2);
    return true;
}

constexpr int kScanPoints = 4096;
constexpr int kFamilyStride = 64;

struct Pairing {
    int a;
    int b;
    MatchCase match;
};

constexpr std::array<Pairing, 4> kPairings{{{0, 2, MatchCase::i}, {0, 3, MatchCase::ii},
                                            {1, 2, MatchCase::iii}, {1, 3, MatchCase::iv}}};

std::optional<double> difference(int n, double c, double theta, double s2, const Pairing& p) {
    const BranchValues g = coexistence_branches(n, c, theta, s2);
    if (!g.g[p.a] || !g.g[p.b]) return std::nullopt;
    return *g.g[p.a] - *g.g[p.b];
}

}  // namespace

double theta_max(int n, double plateau) {
    check_n(n);
    if (!(plateau > 0.0)) throw std::invalid_argument("plateau must be positive");
    const double p2 = std::pow(2.0, n), p4 = std::pow(4.0, n), r3 = std::pow(3.0, 0.5 * n);
    return plateau * (2.0 * p2 - 2.0 * std::sqrt(p4 - p2 * r3) - r3) / r3;
}

HeightPair spike_heights(int n, double theta, double plateau) {
    check_n(n);
    if (!(theta >= 0.0) || !std::isfinite(theta)) throw std::invalid_argument("theta must be finite and non-negative");
    if (!(plateau > 0.0) || !std::isfinite(plateau)) throw std::invalid_argument("plateau must be positive");
    const double a = std::pow(2.0, 0.5 * n);
    const double b = std::pow(3.0, 0.5 * n) * (plateau + theta);
    const double k = std::pow(6.0, 0.5 * n) * theta * plateau;
    HeightPair out;
    out.plateau = plateau;
    if (!ordered_roots(a, b, k, out.c01, out.c02, out.discriminant)) {
        out.c01 = out.c02 = kNaN;
        return out;
    }
    out.admissible = out.discriminant > 0.0 && theta < theta_max(n, plateau);
    if (!out.admissible) out.c01 = out.c02 = kNaN;
    return out;
}

std::string_view to_string(Branch b) {
    switch (b) {
        case Branch::tall: return "tall";
        case Branch::low: return "short";
        case Branch::off: return "off";
    }
    return "off";
}

Branch parse_branch(std::string_view text) {
    if (text == "tall") return Branch::tall;
    if (text == "short") return Branch::low;
    if (text == "off") return Branch::off;
    throw std::invalid_argument("unknown branch '" + std::string(text) + "' (expected tall, short or off)");
}

SpikePattern build_pattern(std::span<const CriticalPoint> maxima, std::span<const Branch> branches, double chi,
                           double theta, int n, const PatternOptions& options) {
    check_n(n);
    if (maxima.size() != branches.size()) throw std::invalid_argument("one branch tag is required per maximum");
    if (!options.plateaus.empty() && options.plateaus.size() != maxima.size())
        throw std::invalid_argument("one plateau is required per maximum");
    if (!(chi > 0.0)) throw std::invalid_argument("chi must be positive");
    if (!(options.speed > 0.0)) throw std::invalid_argument("speed multiplier must be positive");
    if (std::all_of(branches.begin(), branches.end(), [](Branch b) { return b == Branch::off; }))
        throw std::invalid_argument("at least one site must be tall or short");

    SpikePattern pattern;
    pattern.dim = n;
    pattern.theta = theta;
    pattern.chi = chi;
    pattern.speed = options.speed;
    for (size_t m = 0; m < maxima.size(); ++m) {
        const CriticalPoint& cp = maxima[m];
        if (cp.kind != CriticalKind::maximum) throw std::invalid_argument("pattern sites must be non-degenerate maxima");
        const double plateau = options.plateaus.empty() ? 1.0 : options.plateaus[m];
        SpikeSite site;
        site.center = cp.location;
        site.h = cp.h;
        site.axes = cp.axes;
        site.branch = branches[m];
        site.plateau = plateau;
        if (site.branch != Branch::off) {
            const HeightPair pair = spike_heights(n, theta, plateau);
            if (!pair.admissible) {
                std::ostringstream msg;
                msg << "theta = " << theta << " is not below the threshold theta_max = " << theta_max(n, plateau);
                throw std::invalid_argument(msg.str());
            }
            site.height = site.branch == Branch::tall ? pair.c01 : pair.c02;
        }
        pattern.sites.push_back(site);
    }

    const double scale = chi * options.speed;
    for (size_t a = 0; a < pattern.sites.size(); ++a) {
        for (size_t b = a + 1; b < pattern.sites.size(); ++b) {
            const auto& sa = pattern.sites[a];
            const auto& sb = pattern.sites[b];
            auto width = [&](const SpikeSite& s) {
                double hmin = s.h[0];
                if (n == 2) hmin = std::min(hmin, s.h[1]);
                return 1.0 / std::sqrt(hmin * scale);
            };
            const double sep = std::hypot(sa.center[0] - sb.center[0], n == 2 ? sa.center[1] - sb.center[1] : 0.0);
            const double sd = std::max(width(sa), width(sb));
            if (sep < 6.0 * sd) {
                std::ostringstream msg;
                msg << "sites " << a << " and " << b << " are " << sep << " apart, less than 6 spike widths (" << 6.0 * sd
                    << ")";
                pattern.warnings.push_back(msg.str());
            }
        }
    }
    return pattern;
}

double evaluate_pattern(const SpikePattern& pattern, std::span<const double> x) {
    if (static_cast<int>(x.size()) != pattern.dim) throw std::invalid_argument("point dimension mismatch");
    const double scale = pattern.chi * pattern.speed;
    double sum = 0.0;
    for (const auto& s : pattern.sites) {
        if (s.height == 0.0) continue;
        double q = 0.0;
        for (int i = 0; i < pattern.dim; ++i) {
            double proj = 0.0;
            for (int j = 0; j < pattern.dim; ++j) proj += s.axes[i][j] * (x[j] - s.center[j]);
            q += s.h[i] * proj * proj;
        }
        sum += s.height * std::exp(-0.5 * scale * q);
    }
    return sum;
}

Residuals balancing_residuals(int n, double c, double theta, double s1, double s2) {
    check_n(n);
    auto p = [n](double x) { return inv_half_power(x, n); };
    const double t1 = 1.0 + theta;
    Residuals r;
    r.i1 = -p(3.0) * s1 * s1 - 2.0 * p(c + 2.0) * s1 * s2 - p(2.0 * c + 1.0) * s2 * s2 + p(2.0) * t1 * s1 +
           p(c + 1.0) * t1 * s2 - theta;
    r.i2 = -p(c + 2.0) * s1 * s1 - 2.0 * p(2.0 * c + 1.0) * s1 * s2 - p(3.0 * c) * s2 * s2 + p(c + 1.0) * t1 * s1 +
           p(2.0 * c) * t1 * s2 - p(c) * theta;
    return r;
}

BalancingJacobian balancing_jacobian(int n, double c_in, double theta, double s1_in, double s2_in) {
    check_n(n);
    using X = long double;
    auto p = [n](X x) { return n == 2 ? 1.0L / x : 1.0L / std::sqrt(x); };
    const X c = c_in, s1 = s1_in, s2 = s2_in, t1 = 1.0L + theta;
    const X d11 = -2.0L * p(3.0L) * s1 - 2.0L * p(c + 2.0L) * s2 + p(2.0L) * t1;
    const X d12 = -2.0L * p(c + 2.0L) * s1 - 2.0L * p(2.0L * c + 1.0L) * s2 + p(c + 1.0L) * t1;
    const X d21 = p(c + 1.0L) * t1 - 2.0L * (p(c + 2.0L) * s1 + p(2.0L * c + 1.0L) * s2);
    const X d22 = -2.0L * p(2.0L * c + 1.0L) * s1 - 2.0L * p(3.0L * c) * s2 + p(2.0L * c) * t1;
    BalancingJacobian j;
    j.d11 = static_cast<double>(d11);
    j.d12 = static_cast<double>(d12);
    j.d21 = static_cast<double>(d21);
    j.d22 = static_cast<double>(d22);
    j.det = static_cast<double>(d11 * d22 - d12 * d21);
    return j;
}

double determinant_polynomial(int n, double c_in, double theta, double s1_in, double s2_in) {
    check_n(n);
    using X = long double;
    auto p = [n](X x) { return n == 2 ? 1.0L / x : 1.0L / std::sqrt(x); };
    auto q = [n](X x) { return n == 2 ? 1.0L / (x * x) : 1.0L / x; };
    const X c = c_in, s1 = s1_in, s2 = s2_in, t1 = 1.0L + theta;
    const X value = 4.0L * (p(6.0L * c + 3.0L) - q(c + 2.0L)) * s1 * s1 +
                    4.0L * (p(9.0L * c) - p((c + 2.0L) * (2.0L * c + 1.0L))) * s1 * s2 +
                    2.0L * t1 * (-p(6.0L * c) - p(4.0L * c + 2.0L) + 2.0L * p((c + 2.0L) * (c + 1.0L))) * s1 +
                    4.0L * (p(3.0L * c * c + 6.0L * c) - q(2.0L * c + 1.0L)) * s2 * s2 +
                    (p(4.0L * c) - q(c + 1.0L)) * t1 * t1 +
                    2.0L * t1 * s2 * (2.0L * p((2.0L * c + 1.0L) * (c + 1.0L)) - p(c * (4.0L + 2.0L * c)) - p(6.0L * c));
    return static_cast<double>(value);
}

BranchValues coexistence_branches(int n, double c, double theta, double s2) {
    check_n(n);
    auto p = [n](double x) { return inv_half_power(x, n); };
    const double t1 = 1.0 + theta;
    BranchValues out;

    const double b1 = p(2.0) * t1 - 2.0 * p(c + 2.0) * s2;
    const double k1 = p(2.0 * c + 1.0) * s2 * s2 - p(c + 1.0) * t1 * s2 + theta;
    double hi = 0.0, lo = 0.0;
    if (ordered_roots(p(3.0), b1, k1, hi, lo, out.delta1)) {
        out.g[0] = hi;
        out.g[1] = lo;
    }

    const double b2 = p(c + 1.0) * t1 - 2.0 * p(2.0 * c + 1.0) * s2;
    const double k2 = p(3.0 * c) * s2 * s2 - p(2.0 * c) * t1 * s2 + p(c) * theta;
    if (ordered_roots(p(c + 2.0), b2, k2, hi, lo, out.delta2)) {
        out.g[2] = hi;
        out.g[3] = lo;
    }
    return out;
}

std::string_view to_string(MatchCase m) {
    switch (m) {
        case MatchCase::i: return "i";
        case MatchCase::ii: return "ii";
        case MatchCase::iii: return "iii";
        case MatchCase::iv: return "iv";
    }
    return "i";
}

std::vector<CoexistenceRoot> solve_coexistence(int n, double c, double theta) {
    check_n(n);
    if (!(c >= 1.0) || !std::isfinite(c)) throw std::invalid_argument("speed ratio c must be at least 1");
    const double tmax = theta_max(n);
    if (!(theta > 0.0 && theta < tmax)) {
        std::ostringstream msg;
        msg << "theta = " << theta << " must lie in (0, theta_max = " << tmax << ")";
        throw std::invalid_argument(msg.str());
    }
    const double s2_max = 2.0 * spike_heights(n, theta).c01;
    auto grid = [&](int k) { return s2_max * k / kScanPoints; };
    std::vector<CoexistenceRoot> roots;

    if (std::abs(c - 1.0) <= 1e-12) {
        for (int k = kFamilyStride; k <= kScanPoints; k += kFamilyStride) {
            const double s2 = grid(k);
            const BranchValues g = coexistence_branches(n, c, theta, s2);
            const std::array<std::pair<int, MatchCase>, 2> picks{{{0, MatchCase::i}, {1, MatchCase::iv}}};
            for (auto [idx, match] : picks) {
                if (!g.g[idx] || !(*g.g[idx] > 0.0)) continue;
                CoexistenceRoot r;
                r.s1 = *g.g[idx];
                r.s2 = s2;
                r.match = match;
                r.residuals = balancing_residuals(n, c, theta, r.s1, r.s2);
                r.degenerate = true;
                roots.push_back(r);
            }
        }
        return roots;
    }

    for (const Pairing& pair : kPairings) {
        std::optional<double> prev = difference(n, c, theta, grid(1), pair);
        for (int k = 1; k <= kScanPoints; ++k) {
            const std::optional<double> cur = k == 1 ? prev : difference(n, c, theta, grid(k), pair);
            double root_s2 = kNaN;
            if (cur && *cur == 0.0) {
                root_s2 = grid(k);
            } else if (k > 1 && prev && cur && *prev != 0.0 && (*prev < 0.0) != (*cur < 0.0)) {
                double lo = grid(k - 1), hi = grid(k);
                double flo = *prev;
                while (true) {
                    const double mid = 0.5 * (lo + hi);
                    if (!(mid > lo && mid < hi)) break;
                    const std::optional<double> fm = difference(n, c, theta, mid, pair);
                    if (!fm) break;
                    if (*fm == 0.0) {
                        lo = hi = mid;
                        break;
                    }
                    if ((*fm < 0.0) == (flo < 0.0)) {
                        lo = mid;
                        flo = *fm;
                    } else {
                        hi = mid;
                    }
                }
                root_s2 = 0.5 * (lo + hi);
            }
            prev = cur;
            if (std::isnan(root_s2)) continue;
            const BranchValues g = coexistence_branches(n, c, theta, root_s2);
            if (!g.g[pair.a]) continue;
            CoexistenceRoot r;
            r.s1 = *g.g[pair.a];
            r.s2 = root_s2;
            r.match = pair.match;
            r.residuals = balancing_residuals(n, c, theta, r.s1, r.s2);
            if (!(r.s1 > 0.0 && r.s2 > 0.0)) continue;
            if (std::abs(r.residuals.i1) > 1e-10 || std::abs(r.residuals.i2) > 1e-10) continue;
            roots.push_back(r);
        }
    }
    return roots;
}

ResourceMoments resource_moments(const ScalarField& r, const Box& domain) {
    constexpr int panels = 2000;  // 10^4 nodes per axis
    ResourceMoments m;
    auto accumulate = [&](std::span<const double> x, double w) {
        const double v = r(x);
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("resource must be positive at every node");
        m.r1 += w * v;
        m.r2 += w * v * v;
        m.r3 += w * v * v * v;
    };
    const QuadratureRule qx = composite_gauss_legendre(domain.lower[0], domain.upper[0], panels);
    if (domain.dim == 1) {
        for (size_t i = 0; i < qx.nodes.size(); ++i) accumulate(std::span<const double>(&qx.nodes[i], 1), qx.weights[i]);
        return m;
    }
    if (domain.dim != 2) throw std::invalid_argument("domain dimension must be 1 or 2");
    const QuadratureRule qy = composite_gauss_legendre(domain.lower[1], domain.upper[1], panels);
    for (size_t j = 0; j < qy.nodes.size(); ++j) {
        ResourceMoments row;
        std::swap(row, m);
        for (size_t i = 0; i < qx.nodes.size(); ++i) {
            const Vec2 p{qx.nodes[i], qy.nodes[j]};
            accumulate(std::span<const double>(p.data(), 2), qx.weights[i]);
        }
        std::swap(row, m);
        m.r1 += qy.weights[j] * row.r1;
        m.r2 += qy.weights[j] * row.r2;
        m.r3 += qy.weights[j] * row.r3;
    }
    return m;
}

double resource_beta(const ScalarField& r, const Box& domain) {
    const ResourceMoments m = resource_moments(r, domain);
    return m.r2 / m.r3;
}

double epsilon_star(int n, double c4) {
    check_n(n);
    const double r2 = std::pow(2.0, 0.5 * n), p4 = std::pow(4.0, n), p2 = std::pow(2.0, n);
    const double inner = 2.0 * std::pow(3.0, 0.5 * n) - p2;
    return (r2 * p4 - r2 * inner * inner) / (4.0 * p4 * c4);
}

IfdThreshold ifd_threshold(int n, std::span<const IfdSite> sites, int active, const ScalarField& r, const Box& domain) {
    check_n(n);
    if (active < 1 || active > static_cast<int>(sites.size()))
        throw std::invalid_argument("active site count must be between 1 and the number of sites");
    IfdThreshold out;
    for (int m = 0; m < active; ++m) {
        const IfdSite& s = sites[static_cast<size_t>(m)];
        if (!(s.plateau > 0.0)) throw std::invalid_argument("site plateau must be positive");
        const double det = n == 2 ? s.h[0] * s.h[1] : s.h[0];
        out.alpha1 += s.plateau * s.plateau * s.plateau / std::sqrt(det);
    }
    const ResourceMoments m = resource_moments(r, domain);
    out.c4 = m.r2 / (out.alpha1 * half_power(std::numbers::pi, n));
    out.epsilon_star = epsilon_star(n, out.c4);
    return out;
}

}  // namespace allee
