// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

using namespace allee;
using namespace testing;

TEST_CASE("gaussian jet at its centre") {
    const Potential pot = narrow_gaussian();
    const double x = 0.0;
    const Jet j = pot.jet(std::span(&x, 1));
    CHECK(j.value == doctest::Approx(1.9947114020071635).epsilon(1e-15));
    CHECK(j.gradient[0] == 0.0);
    CHECK(j.hessian[0][0] == doctest::Approx(-50.0 * kAmp).epsilon(1e-14));
    CHECK(j.hessian[0][0] == doctest::Approx(-99.73557010035817).epsilon(1e-13));
}

TEST_CASE("quadratic jet") {
    const Potential pot = parabola();
    const double x = 0.3;
    const Jet j = evaluate_jet(pot, std::span(&x, 1));
    CHECK(j.value == doctest::Approx(0.91).epsilon(1e-15));
    CHECK(j.gradient[0] == doctest::Approx(-0.6).epsilon(1e-15));
    CHECK(j.hessian[0][0] == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("two-peak signal value against high-precision reference") {
    const double x = 0.5;
    CHECK(rel(two_peaks().value(std::span(&x, 1)), kTwoPeakAtHalf) < 1e-15);
}

TEST_CASE("jet rejects wrong dimension and non-finite points") {
    const Potential pot = narrow_gaussian();
    const std::array<double, 2> p{0.0, 0.0};
    CHECK_THROWS_AS(pot.jet(p), std::invalid_argument);
    const double bad = std::nan("");
    CHECK_THROWS_AS(pot.jet(std::span(&bad, 1)), std::invalid_argument);
    CHECK_THROWS_AS(Potential(3, GaussianSum{}), std::invalid_argument);
    CHECK_THROWS_AS(Potential(1, GaussianSum{{{1.0, {0.0, 0.0}, 0.0}}, 0.0}), std::invalid_argument);
}

TEST_CASE("maxima of a parabola") {
    const auto search = find_maxima(parabola(), unit_interval(), 16);
    REQUIRE(search.maxima.size() == 1);
    const auto& m = search.maxima[0];
    CHECK(std::abs(m.location[0]) < 1e-14);
    CHECK(m.value == doctest::Approx(1.0));
    CHECK(m.h[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m.kind == CriticalKind::maximum);
    CHECK_FALSE(m.degenerate);
}

TEST_CASE("maxima of a narrow gaussian") {
    const auto search = find_maxima(narrow_gaussian(), unit_interval(), 64);
    REQUIRE(search.maxima.size() == 1);
    CHECK(search.maxima[0].h[0] == doctest::Approx(50.0 * kAmp).epsilon(1e-13));
    CHECK(search.maxima[0].gradient_norm <= 1e-12 * std::max(1.0, search.maxima[0].h[0]));
}

TEST_CASE("two-peak maxima shifted by overlap") {
    const auto search = find_maxima(two_peaks(), unit_interval(), 64);
    REQUIRE(search.maxima.size() == 2);
    CHECK(search.maxima[0].value > search.maxima[1].value);
    CHECK(std::abs(search.maxima[0].location[0] - kTwoPeakRight) < 1e-12);
    CHECK(std::abs(search.maxima[1].location[0] - kTwoPeakLeft) < 1e-12);
    CHECK(rel(search.maxima[0].h[0], kTwoPeakRightH) < 1e-10);
    CHECK(rel(search.maxima[1].h[0], kTwoPeakLeftH) < 1e-10);
    CHECK(search.diagnostics.empty());
}

TEST_CASE("critical point search reports the saddle between peaks") {
    const auto search = find_critical_points(two_peaks(), unit_interval(), 64);
    CHECK(search.maxima.size() == 2);
    REQUIRE(search.others.size() == 1);
    CHECK(search.others[0].laplacian > 0.0);
    CHECK(search.others[0].location[0] > -0.5);
    CHECK(search.others[0].location[0] < 0.5);
}

TEST_CASE("two-dimensional anisotropic peak") {
    const Potential pot(2, QuadraticPeak{0.5, {0.1, -0.2}, {3.0, 1.0}});
    const auto search = find_maxima(pot, Box{2, {-1.0, -1.0}, {1.0, 1.0}}, 16);
    REQUIRE(search.maxima.size() == 1);
    const auto& m = search.maxima[0];
    CHECK(m.location[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(m.location[1] == doctest::Approx(-0.2).epsilon(1e-12));
    const double hi = std::max(m.h[0], m.h[1]), lo = std::min(m.h[0], m.h[1]);
    CHECK(hi == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-dimensional gaussian pair") {
    const Potential pot(2, GaussianSum{{{2.0, {0.4, 0.4}, 0.2}, {1.5, {-0.4, -0.3}, 0.25}}, 0.0});
    const auto search = find_maxima(pot, Box{2, {-1.0, -1.0}, {1.0, 1.0}}, 32);
    REQUIRE(search.maxima.size() == 2);
    CHECK(search.maxima[0].value > search.maxima[1].value);
    for (const auto& m : search.maxima) {
        const Jet j = pot.jet(std::span<const double>(m.location.data(), 2));
        CHECK(std::hypot(j.gradient[0], j.gradient[1]) <= 1e-12 * std::max(1.0, m.h[0]));
        CHECK(m.h[0] > 0.0);
        CHECK(m.h[1] > 0.0);
    }
}

TEST_CASE("search preconditions") {
    CHECK_THROWS_AS(find_maxima(parabola(), unit_interval(), 4), std::invalid_argument);
    CHECK_THROWS_AS(find_maxima(parabola(), Box{2, {-1.0, -1.0}, {1.0, 1.0}}, 16), std::invalid_argument);
    CHECK_THROWS_AS(find_maxima(parabola(), Box{1, {1.0, 0.0}, {1.0, 0.0}}, 16), std::invalid_argument);
}

TEST_CASE("hypotheses hold for a concave parabola") {
    const auto report = verify_hypotheses(parabola(), unit_interval(), 64);
    CHECK(report.h1_ok);
    CHECK(report.h2_ok);
    CHECK(report.laplacian_bound == doctest::Approx(2.0));
}

TEST_CASE("outward-increasing signal violates the boundary hypothesis") {
    // A = 1 - exp(-x^2): minimum at the origin with positive Laplacian, grows towards the boundary.
    const Potential pot(1, GaussianSum{{{-1.0, {0.0, 0.0}, 1.0}}, 1.0});
    const auto report = verify_hypotheses(pot, unit_interval(), 64);
    CHECK(report.h1_ok);
    CHECK_FALSE(report.h2_ok);
    CHECK_FALSE(report.violations.empty());
}

TEST_CASE("hypotheses hold for the narrow gaussian") {
    const auto report = verify_hypotheses(narrow_gaussian(), unit_interval(), 128);
    CHECK(report.h1_ok);
    CHECK(report.h2_ok);
    CHECK_THROWS_AS(verify_hypotheses(narrow_gaussian(), unit_interval(), 32), std::invalid_argument);
}

TEST_CASE("gradient and hessian agree with central differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::vector<Potential> pots{
        narrow_gaussian(), two_peaks(), parabola(),
        Potential(2, GaussianSum{{{2.0, {0.4, 0.4}, 0.3}, {1.5, {-0.4, -0.3}, 0.5}}, -0.5}),
        Potential(2, QuadraticPeak{0.5, {0.1, -0.2}, {3.0, 1.0}})};
    const double step = 1e-5;
    for (const auto& pot : pots) {
        const auto n = static_cast<std::size_t>(pot.dimension());
        for (int trial = 0; trial < 100; ++trial) {
            std::array<double, 2> x{u(rng), u(rng)};
            const Jet j = pot.jet(std::span<const double>(x.data(), n));
            double scale = std::abs(j.value);
            for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(j.gradient[i]));
            for (std::size_t i = 0; i < n; ++i) {
                auto xp = x, xm = x;
                xp[i] += step;
                xm[i] -= step;
                const Jet jp = pot.jet(std::span<const double>(xp.data(), n));
                const Jet jm = pot.jet(std::span<const double>(xm.data(), n));
                const double fd = (jp.value - jm.value) / (2.0 * step);
                CHECK(std::abs(fd - j.gradient[i]) <= 1e-6 * std::max(scale, 1.0));
                for (std::size_t k = 0; k < n; ++k) {
                    const double fdh = (jp.gradient[k] - jm.gradient[k]) / (2.0 * step);
                    CHECK(std::abs(fdh - j.hessian[i][k]) <= 1e-6 * std::max(1.0, std::abs(j.hessian[i][k]) + scale));
                }
            }
            if (n == 2) CHECK(j.hessian[0][1] == j.hessian[1][0]);
        }
    }
}
