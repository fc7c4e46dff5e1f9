// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

using namespace allee;
using namespace testing;

namespace {

SpikePattern pattern_on_two_peaks(Branch first, Branch second) {
    const auto maxima = find_maxima(two_peaks(), unit_interval(), 64).maxima;
    const std::vector<Branch> branches{first, second};
    return build_pattern(maxima, branches, 10.0, 0.3, 1);
}

}  // namespace

TEST_CASE("slope of the height polynomial at the tall root") {
    const HValue v = h_eval(1, 0.3, 1.0, kTall1);
    CHECK(std::abs(v.h) < 1e-14);
    CHECK(std::abs(v.h_prime - kTallSlope1) < 1e-13);
}

TEST_CASE("slope matches a central difference") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> xi(0.0, 2.0), t(0.01, 0.3), a(0.5, 4.0);
    for (int n : {1, 2}) {
        for (int k = 0; k < 100; ++k) {
            const double x = xi(rng), theta = t(rng), plateau = a(rng), step = 1e-6;
            const double fd = (h_eval(n, theta, plateau, x + step).h - h_eval(n, theta, plateau, x - step).h) / (2 * step);
            CHECK(std::abs(fd - h_eval(n, theta, plateau, x).h_prime) < 1e-7 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("predicted eigenvalues for each branch") {
    const auto report = classify_pattern(pattern_on_two_peaks(Branch::tall, Branch::low));
    REQUIRE(report.sites.size() == 2);
    CHECK(std::abs(report.sites[0].lambda_leading - kTallLambda1) < 1e-13);
    CHECK(std::abs(report.sites[1].lambda_leading - kShortLambda1) < 1e-13);
    CHECK(report.verdict == Verdict::unstable);
    CHECK(report.alpha0 == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("tall and off sites are stable") {
    CHECK(classify_pattern(pattern_on_two_peaks(Branch::tall, Branch::off)).verdict == Verdict::linearly_stable);
    CHECK(classify_pattern(pattern_on_two_peaks(Branch::tall, Branch::tall)).verdict == Verdict::linearly_stable);
    const auto off = classify_pattern(pattern_on_two_peaks(Branch::tall, Branch::off));
    CHECK(off.sites[1].lambda_leading == doctest::Approx(-std::sqrt(6.0) * 0.3 / std::sqrt(std::numbers::pi)));
}

TEST_CASE("stability in two dimensions") {
    CriticalPoint m;
    m.kind = CriticalKind::maximum;
    m.h = {100.0, 100.0};
    const std::vector<CriticalPoint> maxima{m};
    for (auto [b, expected] : {std::pair{Branch::tall, Verdict::linearly_stable}, std::pair{Branch::low, Verdict::unstable}}) {
        const std::vector<Branch> branches{b};
        const auto report = classify_pattern(build_pattern(maxima, branches, 10.0, 0.3, 2));
        CHECK(report.verdict == expected);
        const double c = b == Branch::tall ? 1.2 : 0.75;
        const double slope = -2.0 * 3.0 * c * c + 2.0 * 3.0 * 1.3 * c - 6.0 * 0.3;
        CHECK(report.sites[0].lambda_leading == doctest::Approx(slope / std::numbers::pi).epsilon(1e-13));
    }
}

TEST_CASE("verdict thresholds") {
    CHECK(verdict_from_lambda(-1e-3) == Verdict::linearly_stable);
    CHECK(verdict_from_lambda(1e-3) == Verdict::unstable);
    CHECK(verdict_from_lambda(1e-11) == Verdict::marginal);
    CHECK(verdict_from_lambda(-1e-11) == Verdict::marginal);
    CHECK(to_string(Verdict::linearly_stable) == "linearly-stable");
}

TEST_CASE("coexistence classification") {
    const auto roots = solve_coexistence(1, 2.5, 0.3);
    REQUIRE(roots.size() == 1);
    const CoexistenceVerdict v = coexistence_stability(1, 2.5, 0.3, roots[0]);
    CHECK(v.determinant < 0.0);
    CHECK(v.verdict == CoexistenceClass::unstable);
    CHECK(std::abs(v.determinant - v.det_crosscheck) <= 1e-9 * std::abs(v.determinant));
    CHECK(v.trace == doctest::Approx(v.jacobian.d11 + v.jacobian.d22));
}

namespace {

// Follows I1 = 0 (quadratic in S1, coefficients from three samples) over S2 and counts sign changes of I2.
int crossings(double c, double theta) {
    const double top = 2.0 * spike_heights(1, theta).c01;
    const int samples = 200000;
    std::array<int, 2> prev{0, 0};
    int changes = 0;
    for (int k = 1; k <= samples; ++k) {
        const double s2 = top * k / samples;
        const double f0 = balancing_residuals(1, c, theta, 0.0, s2).i1;
        const double f1 = balancing_residuals(1, c, theta, 1.0, s2).i1;
        const double f2 = balancing_residuals(1, c, theta, 2.0, s2).i1;
        const double a = 0.5 * (f2 - 2.0 * f1 + f0), b = f1 - f0 - a;
        const double disc = b * b - 4.0 * a * f0;
        std::array<int, 2> sign{0, 0};
        if (disc >= 0.0) {
            const double roots[2] = {(-b + std::sqrt(disc)) / (2.0 * a), (-b - std::sqrt(disc)) / (2.0 * a)};
            for (int r = 0; r < 2; ++r) {
                if (roots[r] > 0.0) sign[r] = balancing_residuals(1, c, theta, roots[r], s2).i2 > 0.0 ? 1 : -1;
            }
        }
        for (int r = 0; r < 2; ++r) {
            if (sign[r] != 0 && prev[r] != 0 && sign[r] != prev[r]) ++changes;
        }
        prev = sign;
    }
    return changes;
}

}  // namespace

TEST_CASE("no coexistence roots just above equal speeds at small threshold") {
    CHECK(solve_coexistence(1, 1.02, 0.05).empty());
    CHECK(crossings(1.02, 0.05) == 0);
    // the same scan sees the known roots
    CHECK(crossings(2.5, 0.3) == 1);
    CHECK(crossings(3.0, 0.2) == 1);
}

TEST_CASE("every coexistence root found in a parameter scan is classified unstable") {
    for (double c : {1.5, 2.0, 2.5, 3.0, 4.0}) {
        for (double theta : {0.1, 0.2, 0.3, 0.4}) {
            for (const auto& r : solve_coexistence(1, c, theta)) {
                const CoexistenceVerdict v = coexistence_stability(1, c, theta, r);
                CHECK(v.verdict == CoexistenceClass::unstable);
            }
        }
    }
}

TEST_CASE("ideal free report for a constant resource") {
    const ScalarField r = [](std::span<const double>) { return 1.0; };
    const auto maxima = find_maxima(parabola(), unit_interval(), 16).maxima;
    const std::vector<Branch> branches{Branch::tall};
    const IfdReport rep = ifd_equilibria_report(1, 0.3, r, unit_interval(), maxima, branches, 10.0);
    CHECK(rep.beta == doctest::Approx(1.0));
    CHECK_FALSE(rep.beta_below_one);
    CHECK(rep.resource_state.lambda < 0.0);
    CHECK(rep.resource_state.verdict == Verdict::linearly_stable);
}

TEST_CASE("ideal free report flags the small-threshold regime") {
    const Potential pot = narrow_gaussian();
    const ScalarField r = [&](std::span<const double> x) { return std::exp(pot.value(x)); };
    const auto maxima = find_maxima(pot, unit_interval(), 64).maxima;
    const std::vector<Branch> branches{Branch::tall};
    const IfdReport rep = ifd_equilibria_report(1, 0.03, r, unit_interval(), maxima, branches, 20.0);
    CHECK(rel(rep.beta, kBetaExpSignal) < 1e-11);
    CHECK(rep.beta_below_one);
    CHECK(rep.override_theta == doctest::Approx(rep.threshold.epsilon_star / std::sqrt(20.0)).epsilon(1e-14));
    CHECK(rep.small_theta_override);
    CHECK(rep.spike_state.verdict == Verdict::unstable);

    const IfdReport large = ifd_equilibria_report(1, 0.3, r, unit_interval(), maxima, branches, 20000.0);
    CHECK_FALSE(large.small_theta_override);
    CHECK(large.spike_state.verdict == Verdict::linearly_stable);
}
