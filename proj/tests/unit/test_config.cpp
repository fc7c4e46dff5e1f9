// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

using namespace allee;
using namespace allee::harness;
using namespace testing;

namespace {

const char* kMinimal = R"(# smallest useful simulate config
mode = simulate

[potential]
gaussians = 2, 0, 0.3

[physics]
chi = 10
theta = 0.3

[initial]
u = constant-plus-cosine(1, 0.1, 3)
)";

std::vector<ConfigIssue> issues_of(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.issues();
    }
    return {};
}

bool mentions(const std::vector<ConfigIssue>& issues, int line, std::string_view needle) {
    for (const auto& i : issues) {
        if (i.line == line && i.message.find(needle) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("minimal config gets documented defaults") {
    const ExperimentConfig c = parse_config(kMinimal);
    CHECK(c.mode == Mode::simulate);
    CHECK(c.potential.type == PotentialSection::Type::gaussian_sum);
    CHECK(c.potential.dimension == 1);
    REQUIRE(c.potential.gaussians.size() == 1);
    CHECK(c.potential.gaussians[0].amplitude == 2.0);
    CHECK(c.potential.gaussians[0].width == 0.3);
    CHECK(c.domain.lower[0] == -1.0);
    CHECK(c.domain.upper[0] == 1.0);
    CHECK(c.domain.cells[0] == 4096);
    CHECK(c.physics.d == 1.0);
    CHECK(c.physics.mu == 1.0);
    CHECK(c.physics.reaction == ReactionSpec::Kind::cubic_allee);
    CHECK(c.schedule.schedule.steady_tol == 1e-9);
    CHECK(c.output_dir == "out");
    REQUIRE(c.initial.u.size() == 1);
    CHECK(c.initial.u[0].kind == InitialTerm::Kind::constant_plus_cosine);
    CHECK(c.initial.u[0].params == std::vector<double>{1.0, 0.1, 3.0});
}

TEST_CASE("negative chi names the key, constraint and line") {
    std::string text = kMinimal;
    text.replace(text.find("chi = 10"), 8, "chi = -3");
    const auto issues = issues_of(text);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].line == 8);
    CHECK(issues[0].message.find("chi") != std::string::npos);
    CHECK(issues[0].message.find("> 0") != std::string::npos);
}

TEST_CASE("all problems are reported together") {
    const auto issues = issues_of(R"([potential]
gaussians = 1, 0, -0.2
colour = blue

[physics]
chi = 0
theta = 0.3

[domain]
cells = 4

[nonsense]
x = 1
)");
    CHECK(mentions(issues, 2, "width"));
    CHECK(mentions(issues, 3, "colour"));
    CHECK(mentions(issues, 6, "chi"));
    CHECK(mentions(issues, 10, "cells"));
    CHECK(mentions(issues, 12, "nonsense"));
    CHECK(issues.size() >= 5);
}

TEST_CASE("missing required keys") {
    const auto issues = issues_of("[physics]\nd = 1\n");
    bool chi = false, theta = false, gauss = false;
    for (const auto& i : issues) {
        chi |= i.message.find("physics.chi") != std::string::npos;
        theta |= i.message.find("physics.theta") != std::string::npos;
        gauss |= i.message.find("gaussians") != std::string::npos;
    }
    CHECK(chi);
    CHECK(theta);
    CHECK(gauss);
}

TEST_CASE("syntax errors") {
    CHECK(mentions(issues_of("[physics\nchi = 1\n"), 1, ""));
    CHECK(mentions(issues_of("[physics]\nchi 1\ntheta = 0.3\n[potential]\ngaussians = 1, 0, 1\n"), 2, ""));
    CHECK(mentions(issues_of("[physics]\nchi = 1\nchi = 2\ntheta = 0.3\n[potential]\ngaussians = 1, 0, 1\n"), 3, "chi"));
    CHECK(mentions(issues_of("[physics]\nchi = abc\ntheta = 0.3\n[potential]\ngaussians = 1, 0, 1\n"), 2, "chi"));
    CHECK(mentions(issues_of("[physics]\nchi = 1\ntheta = 1.5\n[potential]\ngaussians = 1, 0, 1\n"), 3, "theta"));
    CHECK(mentions(issues_of("stray = 1\n[physics]\nchi = 1\ntheta = 0.3\n[potential]\ngaussians = 1, 0, 1\n"), 1, "stray"));
}

TEST_CASE("initial templates are validated") {
    std::string text = kMinimal;
    text.replace(text.find("constant-plus-cosine(1, 0.1, 3)"), 31, "wobble(1)");
    CHECK_FALSE(issues_of(text).empty());
    text = kMinimal;
    text.replace(text.find("constant-plus-cosine(1, 0.1, 3)"), 31, "gaussian-bump(1, -2)");
    CHECK_FALSE(issues_of(text).empty());
}

TEST_CASE("sweep axes are validated per value") {
    std::string text = kMinimal;
    text += "\n[sweep]\nrun = simulate\nchi = 10, -1\n";
    CHECK(mentions(issues_of(text), 16, "chi"));
    text = kMinimal;
    text += "\n[sweep]\nflavour = 1, 2\n";
    CHECK(mentions(issues_of(text), 15, "flavour"));
}

TEST_CASE("sweep values apply to the right fields") {
    ExperimentConfig c = parse_config(kMinimal);
    CHECK(apply_sweep_value(c, "chi", 70.0));
    CHECK(apply_sweep_value(c, "theta", 0.1));
    CHECK(apply_sweep_value(c, "cells", 512.0));
    CHECK(c.physics.chi == 70.0);
    CHECK(c.physics.theta == 0.1);
    CHECK(c.domain.cells[0] == 512);
    CHECK_FALSE(apply_sweep_value(c, "colour", 1.0));
}

TEST_CASE("shipped configs round trip") {
    for (int k = 1; k <= 9; ++k) {
        const auto path = std::filesystem::path(ALLEE_CONFIG_DIR) / ("fig" + std::to_string(k) + ".cfg");
        CAPTURE(path.string());
        const ExperimentConfig c = load_config(path);
        const std::string text = serialize_config(c);
        const ExperimentConfig again = parse_config(text);
        CHECK(again == c);
        CHECK(serialize_config(again) == text);
    }
}

TEST_CASE("round trip of a two-dimensional config with every section") {
    const ExperimentConfig c = parse_config(R"(mode = sweep
[potential]
type = gaussian-sum
dimension = 2
gaussians = 2, 0.1, -0.2, 0.3; 1.5, -0.4, 0.4, 0.25
offset = -0.5
[domain]
lower = -1, -0.5
upper = 1, 0.5
cells = 64, 32
[physics]
chi = 12.5
d = 0.5
mu = 2
theta = 0.2
speed_ratio = 2.5
reaction = shared-competition
resource = affine 2, 0.5
strategy = aggressive
[initial]
u = gaussian-bump(1, 20, 0.1, -0.2) + constant-plus-cosine(0.1, 0.01, 2, 1)
v = pattern(tall, off)
[schedule]
t_end = 7
snapshots = 0, 1.5
steady_tol = 1e-8
dt_max = 0.1
eigen_count = 4
[output]
dir = results/two
[sweep]
run = compete
theta = 0.1, 0.2
chi = 5, 10
)");
    CHECK(parse_config(serialize_config(c)) == c);
    CHECK(c.potential.gaussians[1].center[1] == 0.4);
    CHECK(c.physics.resource.kind == Resource::Kind::affine);
    CHECK(c.initial.v[0].branches == std::vector<Branch>{Branch::tall, Branch::off});
    CHECK(c.sweep.axes.size() == 2);
}

TEST_CASE("shipped spike-formation config carries its setup verbatim") {
    const ExperimentConfig c = load_config(std::filesystem::path(ALLEE_CONFIG_DIR) / "fig3.cfg");
    CHECK(c.mode == Mode::sweep);
    REQUIRE(c.potential.gaussians.size() == 1);
    CHECK(c.potential.gaussians[0].amplitude == doctest::Approx(5.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-16));
    CHECK(c.potential.gaussians[0].width == 0.2);
    CHECK(c.physics.theta == 0.3);
    CHECK(c.domain.cells[0] == 4096);
    CHECK(c.domain.lower[0] == -1.0);
    CHECK(c.domain.upper[0] == 1.0);
    REQUIRE(c.initial.u.size() == 1);
    CHECK(c.initial.u[0].params[0] == 1.1);
    CHECK(c.initial.u[0].params[1] == 0.001);
    CHECK(c.initial.u[0].params[2] == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-16));
    REQUIRE(c.sweep.axes.size() == 1);
    CHECK(c.sweep.axes[0].values == std::vector<double>{10, 30, 50, 70});
}

TEST_CASE("mode requirements") {
    ExperimentConfig c = parse_config(kMinimal);
    CHECK_NOTHROW(require_mode_inputs(c, Mode::simulate));
    CHECK_THROWS_AS(require_mode_inputs(c, Mode::compete), ConfigError);
    CHECK_THROWS_AS(require_mode_inputs(c, Mode::sweep), ConfigError);
    c.initial.u.clear();
    CHECK_THROWS_AS(require_mode_inputs(c, Mode::eig), ConfigError);
    CHECK_NOTHROW(require_mode_inputs(c, Mode::analyze));
}

TEST_CASE("mode names") {
    for (Mode m : {Mode::analyze, Mode::simulate, Mode::compete, Mode::eig, Mode::sweep}) CHECK(parse_mode(to_string(m)) == m);
    CHECK_FALSE(parse_mode("dance").has_value());
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(load_config("/nonexistent/allee.cfg"), ConfigError);
}
