// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "allee/potential.hpp"

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace allee {

/// Two admissible heights of a single spike over plateau `plateau`.
struct HeightPair {
    double c01 = 0.0;
    double c02 = 0.0;
    double discriminant = 0.0;
    bool admissible = false;
    double plateau = 1.0;
};

/// ā·θ_max(n): the largest Allee threshold for which a spike exists.
double theta_max(int n, double plateau = 1.0);

/// Roots of 2^{n/2}c² − 3^{n/2}(ā+θ)c + 6^{n/2}θā. Inadmissible input gives admissible = false, never throws
/// for θ beyond the threshold. Throws std::invalid_argument on n ∉ {1,2}, θ < 0 or ā ≤ 0.
HeightPair spike_heights(int n, double theta, double plateau = 1.0);

enum class Branch { tall, low, off };

std::string_view to_string(Branch b);
Branch parse_branch(std::string_view text);

struct SpikeSite {
    Vec2 center{0.0, 0.0};
    Vec2 h{0.0, 0.0};
    Mat2 axes{Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
    Branch branch = Branch::off;
    double height = 0.0;
    double plateau = 1.0;
};

struct SpikePattern {
    int dim = 1;
    double theta = 0.0;
    double chi = 1.0;
    double speed = 1.0;
    std::vector<SpikeSite> sites;
    std::vector<std::string> warnings;
};

struct PatternOptions {
    double speed = 1.0;
    /// Per-site plateau ā; empty means ā = 1 everywhere.
    std::vector<double> plateaus;
};

SpikePattern build_pattern(std::span<const CriticalPoint> maxima, std::span<const Branch> branches, double chi,
                           double theta, int n, const PatternOptions& options = {});

double evaluate_pattern(const SpikePattern& pattern, std::span<const double> x);

struct Residuals {
    double i1 = 0.0;
    double i2 = 0.0;
};

Residuals balancing_residuals(int n, double c, double theta, double s1, double s2);

/// Partials of (I1, I2). d12 and d21 come from separate closed forms.
struct BalancingJacobian {
    double d11 = 0.0;
    double d12 = 0.0;
    double d21 = 0.0;
    double d22 = 0.0;
    /// Formed from the unrounded entries in extended precision; near c = 1 the two products nearly cancel.
    double det = 0.0;

    double trace() const { return d11 + d22; }
    double determinant() const { return det; }
};

BalancingJacobian balancing_jacobian(int n, double c, double theta, double s1, double s2);

/// Expanded determinant polynomial I3; equals det of balancing_jacobian with sign +1.
double determinant_polynomial(int n, double c, double theta, double s1, double s2);

struct BranchValues {
    /// g1, g2 solve I1 = 0 for S1; g3, g4 solve I2 = 0. Empty where the discriminant is negative.
    std::array<std::optional<double>, 4> g;
    double delta1 = 0.0;
    double delta2 = 0.0;
};

BranchValues coexistence_branches(int n, double c, double theta, double s2);

enum class MatchCase { i, ii, iii, iv };

std::string_view to_string(MatchCase m);

struct CoexistenceRoot {
    double s1 = 0.0;
    double s2 = 0.0;
    MatchCase match = MatchCase::i;
    Residuals residuals;
    /// Sample of the one-parameter family that appears when c = 1.
    bool degenerate = false;
};

/// Scans S2 over (0, 2·c01] for sign changes of g_a − g_b. Requires c ≥ 1 and θ ∈ (0, θ_max(n)).
std::vector<CoexistenceRoot> solve_coexistence(int n, double c, double theta);

using ScalarField = std::function<double(std::span<const double>)>;

struct ResourceMoments {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
};

/// ∫r, ∫r², ∫r³ by composite Gauss–Legendre. Throws std::invalid_argument if r ≤ 0 at any node.
ResourceMoments resource_moments(const ScalarField& r, const Box& domain);

double resource_beta(const ScalarField& r, const Box& domain);

struct IfdSite {
    double plateau = 1.0;  // e^{A_m}
    Vec2 h{1.0, 1.0};
};

struct IfdThreshold {
    double alpha1 = 0.0;
    double c4 = 0.0;
    double epsilon_star = 0.0;
};

double epsilon_star(int n, double c4);

IfdThreshold ifd_threshold(int n, std::span<const IfdSite> sites, int active, const ScalarField& r,
                           const Box& domain);

}  // namespace allee
