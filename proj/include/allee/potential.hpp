// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace allee {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<Vec2, 2>;

/// Axis-aligned box in one or two dimensions. Only the first `dim` entries are used.
struct Box {
    int dim = 1;
    Vec2 lower{-1.0, 0.0};
    Vec2 upper{1.0, 0.0};

    bool operator==(const Box&) const = default;
};

struct GaussianBump {
    double amplitude = 0.0;
    Vec2 center{0.0, 0.0};
    double width = 1.0;  // exp(-|x - center|^2 / width^2)

    bool operator==(const GaussianBump&) const = default;
};

struct GaussianSum {
    std::vector<GaussianBump> bumps;
    double offset = 0.0;

    bool operator==(const GaussianSum&) const = default;
};

/// A(x) = peak - 1/2 * sum_i curvature_i (x_i - location_i)^2
struct QuadraticPeak {
    double peak = 0.0;
    Vec2 location{0.0, 0.0};
    Vec2 curvature{1.0, 1.0};

    bool operator==(const QuadraticPeak&) const = default;
};

/// Value, gradient and Hessian of A at a point.
struct Jet {
    double value = 0.0;
    Vec2 gradient{0.0, 0.0};
    Mat2 hessian{};

    double laplacian(int dim) const { return dim == 1 ? hessian[0][0] : hessian[0][0] + hessian[1][1]; }
};

/// Environmental signal A. Immutable after construction; all derivatives are closed form.
class Potential {
public:
    Potential(int dim, GaussianSum form);
    Potential(int dim, QuadraticPeak form);

    int dimension() const { return dim_; }
    const std::variant<GaussianSum, QuadraticPeak>& form() const { return form_; }

    /// Throws std::invalid_argument when x.size() != dimension() or x is not finite.
    Jet jet(std::span<const double> x) const;
    double value(std::span<const double> x) const;

    bool operator==(const Potential&) const = default;

private:
    int dim_;
    std::variant<GaussianSum, QuadraticPeak> form_;
};

Jet evaluate_jet(const Potential& potential, std::span<const double> x);

enum class CriticalKind { maximum, other };

struct CriticalPoint {
    Vec2 location{0.0, 0.0};
    double value = 0.0;
    /// Negated Hessian eigenvalues, ordered by descending Hessian eigenvalue.
    Vec2 h{0.0, 0.0};
    /// Unit principal axes; axes[i] belongs to h[i].
    Mat2 axes{Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
    CriticalKind kind = CriticalKind::other;
    bool degenerate = false;
    double laplacian = 0.0;
    double gradient_norm = 0.0;
};

struct SearchDiagnostic {
    Vec2 seed{0.0, 0.0};
    std::string message;
};

struct CriticalPointSearch {
    std::vector<CriticalPoint> maxima;  // sorted by descending value
    std::vector<CriticalPoint> others;
    std::vector<SearchDiagnostic> diagnostics;
};

/// Locates every critical point of A inside `domain`. Requires seeds_per_axis >= 8.
CriticalPointSearch find_critical_points(const Potential& potential, const Box& domain, int seeds_per_axis);

/// Non-degenerate local maxima only (plus whatever diagnostics the search produced).
CriticalPointSearch find_maxima(const Potential& potential, const Box& domain, int seeds_per_axis);

struct HypothesisViolation {
    Vec2 point{0.0, 0.0};
    std::string description;
};

struct HypothesisReport {
    double laplacian_bound = 0.0;  // sup |Laplacian A| over the sample grid
    bool h1_ok = true;
    bool h2_ok = true;
    std::vector<HypothesisViolation> violations;
};

/// Never throws on a failed hypothesis; every failure is listed in the report.
HypothesisReport verify_hypotheses(const Potential& potential, const Box& domain, int samples_per_axis);

}  // namespace allee
