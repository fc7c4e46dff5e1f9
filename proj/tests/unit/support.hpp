// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "allee/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

namespace testing {

// Reference values from 40-digit mpmath evaluations.
inline constexpr double kTall1 = 1.133922526762466202176579283593520017289;
inline constexpr double kShort1 = 0.4582458060465995616516553649653093874888;
inline constexpr double kTallSlope1 = -1.08352101098940604023161530122560358374;
inline constexpr double kTallLambda1 = -0.6113112679553568570657425040115387766013;
inline constexpr double kShortLambda1 = 0.2470458237825034803833902810972931824976;
inline constexpr double kEpsStar1 = 0.1640846996117677624973754941956721370557;
inline constexpr double kBetaExpSignal = 0.1931812304382954139158239359261911625804;
inline constexpr double kTwoPeakAtHalf = 1.994711402021014609688669882148893020555;
inline constexpr double kTwoPeakRight = 0.4999999999930560280651552711377075973796;
inline constexpr double kTwoPeakRightH = 99.73557006642268050042241186545352408912;
inline constexpr double kTwoPeakLeft = -0.4999999999722241122322684617134175101782;
inline constexpr double kTwoPeakLeftH = 49.8677849823081067033922948160019058736;
inline constexpr double kPatternAtHalf = 0.09307802904890488294342240381730315361821;
inline constexpr double kRootS1 = 0.774230678761410564471949069862806320587;  // c = 2.5, theta = 0.3
inline constexpr double kRootS2 = 0.3602580932201251010059608353310151004036;

inline const double kAmp = 5.0 / std::sqrt(2.0 * std::numbers::pi);

inline allee::Potential narrow_gaussian() {
    return allee::Potential(1, allee::GaussianSum{{{kAmp, {0.0, 0.0}, 0.2}}, 0.0});
}

inline allee::Potential two_peaks() {
    return allee::Potential(1, allee::GaussianSum{{{kAmp, {0.5, 0.0}, 0.2}, {kAmp / 2.0, {-0.5, 0.0}, 0.2}}, 0.0});
}

inline allee::Potential parabola() { return allee::Potential(1, allee::QuadraticPeak{1.0, {0.0, 0.0}, {2.0, 2.0}}); }

inline allee::Box unit_interval() { return allee::Box{1, {-1.0, 0.0}, {1.0, 0.0}}; }

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("allee_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing
