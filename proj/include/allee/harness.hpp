// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "allee/asymptotics.hpp"
#include "allee/potential.hpp"
#include "allee/solver.hpp"
#include "allee/stability.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace allee::harness {

enum class Mode { analyze, simulate, compete, eig, sweep };

std::string_view to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view text);

struct PotentialSection {
    enum class Type { gaussian_sum, quadratic };
    Type type = Type::gaussian_sum;
    int dimension = 1;
    std::vector<GaussianBump> gaussians;
    double offset = 0.0;
    double peak = 0.0;
    Vec2 location{0.0, 0.0};
    Vec2 curvature{1.0, 1.0};

    Potential build() const;
    bool operator==(const PotentialSection&) const = default;
};

struct DomainSection {
    Vec2 lower{-1.0, -1.0};
    Vec2 upper{1.0, 1.0};
    std::array<int, 2> cells{4096, 256};

    bool operator==(const DomainSection&) const = default;
};

enum class Strategy { ifd, aggressive };

struct PhysicsSection {
    double chi = 10.0;
    double d = 1.0;
    double mu = 1.0;
    double theta = 0.3;
    double speed_ratio = 1.0;
    ReactionSpec::Kind reaction = ReactionSpec::Kind::cubic_allee;
    Resource resource;
    Strategy strategy = Strategy::ifd;
    std::vector<Branch> branches;

    bool operator==(const PhysicsSection&) const = default;
};

struct InitialTerm {
    enum class Kind { constant_plus_cosine, gaussian_bump, pattern };
    Kind kind = Kind::constant_plus_cosine;
    std::vector<double> params;
    std::vector<Branch> branches;

    bool operator==(const InitialTerm&) const = default;
};

struct InitialSection {
    std::vector<InitialTerm> u;
    std::vector<InitialTerm> v;

    bool operator==(const InitialSection&) const = default;
};

struct ScheduleSection {
    Schedule schedule;
    int eigen_count = 3;

    bool operator==(const ScheduleSection&) const = default;
};

struct SweepAxis {
    std::string key;
    std::vector<double> values;

    bool operator==(const SweepAxis&) const = default;
};

struct SweepSection {
    Mode run = Mode::simulate;
    std::vector<SweepAxis> axes;

    bool operator==(const SweepSection&) const = default;
};

struct ExperimentConfig {
    std::optional<Mode> mode;
    PotentialSection potential;
    DomainSection domain;
    PhysicsSection physics;
    InitialSection initial;
    ScheduleSection schedule;
    std::string output_dir = "out";
    SweepSection sweep;

    Box box() const;
    Grid grid() const;
    ReactionSpec reaction() const;

    bool operator==(const ExperimentConfig&) const = default;
};

struct ConfigIssue {
    int line = 0;  // 0 when the issue is not tied to a line
    std::string message;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

/// Throws ConfigError listing every problem found.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& config);

/// Checks that the config has what `mode` needs. Throws ConfigError.
void require_mode_inputs(const ExperimentConfig& config, Mode mode);

/// Applies one sweep value; returns false for an unknown key.
bool apply_sweep_value(ExperimentConfig& config, std::string_view key, double value);

std::vector<double> initial_field(const ExperimentConfig& config, const std::vector<InitialTerm>& terms,
                                  const Grid& grid, int seeds_per_axis);

struct ComparisonRow {
    std::size_t site = 0;
    Vec2 location{0.0, 0.0};
    Branch branch = Branch::off;
    double predicted_height = 0.0;
    double measured_height = 0.0;
    double height_error = 0.0;
    double half_width = 0.0;
    double predicted_lambda = 0.0;
    double lambda_rayleigh = 0.0;
    double measured_lambda = 0.0;
    double lambda_error = 0.0;
    Verdict predicted_verdict = Verdict::linearly_stable;
    Verdict observed_verdict = Verdict::marginal;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
};

/// Rows for every maximum: predicted branch is the one nearest the measured height.
ComparisonReport compare(const std::vector<CriticalPoint>& maxima, std::span<const SpikeMeasurement> measured,
                         int n, double theta, std::span<const double> plateaus, double measured_lambda);

struct RunOptions {
    std::optional<std::filesystem::path> out;
    int jobs = 1;
    int seed_grid = 64;
};

struct RunResult {
    std::filesystem::path directory;
    std::vector<std::string> files;
    std::string summary;
};

/// Runs `mode`; writes files and a MANIFEST. ConfigError for config problems, other exceptions for runtime faults.
RunResult run_experiment(const ExperimentConfig& config, Mode mode, const RunOptions& options);

namespace csv {

std::string number(double v);
void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace csv

}  // namespace allee::harness
