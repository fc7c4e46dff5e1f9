// SPDX-License-Identifier: Apache-2.0
#include "allee/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace allee::harness {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::optional<double> to_double(std::string_view s) {
    std::string t = trim(s);
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) return std::nullopt;
    return v;
}

std::optional<int> to_int(std::string_view s) {
    const std::string t = trim(s);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) return std::nullopt;
    return v;
}

std::optional<std::vector<double>> to_doubles(std::string_view s) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    for (const auto& item : split(s, ',')) {
        const auto v = to_double(item);
        if (!v) return std::nullopt;
        out.push_back(*v);
    }
    return out;
}

const std::set<std::string, std::less<>> kSections{"potential", "domain",   "physics", "initial",
                                                   "schedule",  "output",   "sweep"};

struct Entry {
    std::string value;
    int line = 0;
};

std::string_view initial_name(InitialTerm::Kind k) {
    switch (k) {
        case InitialTerm::Kind::constant_plus_cosine: return "constant-plus-cosine";
        case InitialTerm::Kind::gaussian_bump: return "gaussian-bump";
        case InitialTerm::Kind::pattern: return "pattern";
    }
    return "constant-plus-cosine";
}

std::optional<std::vector<InitialTerm>> parse_initial(std::string_view text, std::string& error) {
    std::vector<std::string> pieces;
    int depth = 0;
    std::string current;
    for (char ch : text) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == '+' && depth == 0) {
            pieces.push_back(trim(current));
            current.clear();
        } else {
            current += ch;
        }
    }
    pieces.push_back(trim(current));

    std::vector<InitialTerm> terms;
    for (const auto& piece : pieces) {
        const auto open = piece.find('(');
        if (open == std::string::npos || piece.back() != ')') {
            error = "initial term '" + piece + "' must look like name(args)";
            return std::nullopt;
        }
        const std::string name = trim(piece.substr(0, open));
        const std::string args = piece.substr(open + 1, piece.size() - open - 2);
        InitialTerm term;
        if (name == "pattern") {
            term.kind = InitialTerm::Kind::pattern;
            for (const auto& b : split(args, ',')) {
                try {
                    term.branches.push_back(parse_branch(b));
                } catch (const std::invalid_argument& e) {
                    error = e.what();
                    return std::nullopt;
                }
            }
        } else {
            if (name == "constant-plus-cosine") {
                term.kind = InitialTerm::Kind::constant_plus_cosine;
            } else if (name == "gaussian-bump") {
                term.kind = InitialTerm::Kind::gaussian_bump;
            } else {
                error = "unknown initial template '" + name + "'";
                return std::nullopt;
            }
            const auto params = to_doubles(args);
            if (!params) {
                error = "initial template '" + name + "' has non-numeric arguments";
                return std::nullopt;
            }
            term.params = *params;
            const std::size_t lo = term.kind == InitialTerm::Kind::constant_plus_cosine ? 3 : 2;
            const std::size_t hi = term.kind == InitialTerm::Kind::constant_plus_cosine ? 4 : 4;
            if (term.params.size() < lo || term.params.size() > hi) {
                error = "initial template '" + name + "' takes " + std::to_string(lo) + " to " + std::to_string(hi) +
                        " arguments";
                return std::nullopt;
            }
        }
        terms.push_back(std::move(term));
    }
    return terms;
}

std::string format_list(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + csv::number(values[i]);
    return out;
}

std::string format_initial(const std::vector<InitialTerm>& terms) {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        out += i ? " + " : "";
        out += std::string(initial_name(t.kind)) + "(";
        if (t.kind == InitialTerm::Kind::pattern) {
            for (std::size_t b = 0; b < t.branches.size(); ++b) out += (b ? ", " : "") + std::string(to_string(t.branches[b]));
        } else {
            out += format_list(t.params);
        }
        out += ")";
    }
    return out;
}

std::string format_resource(const Resource& r) {
    switch (r.kind) {
        case Resource::Kind::unit: return "unit";
        case Resource::Kind::constant: return "constant " + csv::number(r.a0);
        case Resource::Kind::affine: return "affine " + csv::number(r.a0) + ", " + csv::number(r.a1);
        case Resource::Kind::exp_potential: return "exp-potential";
    }
    return "unit";
}

/// Value-level checks shared by parsing and sweeps.
void validate(const ExperimentConfig& c, const std::map<std::string, int>& lines, std::vector<ConfigIssue>& issues) {
    auto line = [&](const std::string& key) {
        const auto it = lines.find(key);
        return it == lines.end() ? 0 : it->second;
    };
    auto fail = [&](const std::string& key, const std::string& msg) { issues.push_back({line(key), key + ": " + msg}); };

    const auto& p = c.potential;
    const int n = p.dimension;
    if (n != 1 && n != 2) {
        fail("potential.dimension", "must be 1 or 2");
        return;
    }
    if (p.type == PotentialSection::Type::gaussian_sum) {
        if (p.gaussians.empty()) fail("potential.gaussians", "at least one gaussian is required");
        for (const auto& g : p.gaussians) {
            if (!(g.width > 0.0)) fail("potential.gaussians", "every width sigma must be > 0");
        }
    } else {
        for (int i = 0; i < n; ++i) {
            if (!(p.curvature[static_cast<std::size_t>(i)] > 0.0)) fail("potential.curvature", "must be > 0 on every axis");
        }
    }
    for (int i = 0; i < n; ++i) {
        const auto a = static_cast<std::size_t>(i);
        if (!(c.domain.lower[a] < c.domain.upper[a])) fail("domain.upper", "must exceed domain.lower on every axis");
        if (c.domain.cells[a] < 16) fail("domain.cells", "must be at least 16 per axis");
    }
    const auto& ph = c.physics;
    if (!(ph.chi > 0.0)) fail("physics.chi", "must be > 0");
    if (!(ph.d > 0.0)) fail("physics.d", "must be > 0");
    if (!(ph.mu >= 0.0)) fail("physics.mu", "must be >= 0");
    if (!(ph.theta >= 0.0)) fail("physics.theta", "must be >= 0");
    if (ph.reaction == ReactionSpec::Kind::cubic_allee && !(ph.theta < 1.0)) fail("physics.theta", "must be < 1 for cubic-allee");
    if (!(ph.speed_ratio >= 1.0)) fail("physics.speed_ratio", "must be >= 1");
    if (ph.resource.kind == Resource::Kind::constant && !(ph.resource.a0 > 0.0))
        fail("physics.resource", "constant resource must be > 0");
    if (ph.resource.kind == Resource::Kind::affine) {
        const double lo = ph.resource.a0 + ph.resource.a1 * c.domain.lower[0];
        const double hi = ph.resource.a0 + ph.resource.a1 * c.domain.upper[0];
        if (!(lo > 0.0 && hi > 0.0)) fail("physics.resource", "affine resource must be > 0 on the domain");
    }
    const auto& s = c.schedule.schedule;
    if (!(s.t_end > 0.0)) fail("schedule.t_end", "must be > 0");
    if (!(s.steady_tol > 0.0)) fail("schedule.steady_tol", "must be > 0");
    if (!(s.dt_initial > 0.0)) fail("schedule.dt_initial", "must be > 0");
    if (!(s.dt_max > 0.0)) fail("schedule.dt_max", "must be > 0");
    if (s.max_steps < 1) fail("schedule.max_steps", "must be >= 1");
    for (double t : s.snapshots) {
        if (!(t >= 0.0)) fail("schedule.snapshots", "times must be >= 0");
    }
    if (c.schedule.eigen_count < 1) fail("schedule.eigen_count", "must be >= 1");
    for (const auto* terms : {&c.initial.u, &c.initial.v}) {
        for (const auto& t : *terms) {
            if (t.kind == InitialTerm::Kind::gaussian_bump && t.params.size() > static_cast<std::size_t>(2 + n))
                fail("initial", "gaussian-bump takes at most " + std::to_string(2 + n) + " arguments in " +
                                    std::to_string(n) + "D");
            if (t.kind == InitialTerm::Kind::gaussian_bump && !(t.params[1] >= 0.0))
                fail("initial", "gaussian-bump rate must be >= 0");
        }
    }
}

using Handler = std::function<std::optional<std::string>(ExperimentConfig&, const std::string&)>;

std::optional<std::string> set_double(double& target, const std::string& v) {
    const auto d = to_double(v);
    if (!d) return "expected a number, got '" + v + "'";
    target = *d;
    return std::nullopt;
}

std::optional<std::string> set_int(int& target, const std::string& v) {
    const auto d = to_int(v);
    if (!d) return "expected an integer, got '" + v + "'";
    target = *d;
    return std::nullopt;
}

const std::map<std::string, Handler, std::less<>>& handlers() {
    static const std::map<std::string, Handler, std::less<>> table{
        {"potential.type",
         [](ExperimentConfig& c, const std::string& v) -> std::optional<std::string> {
             if (v == "gaussian-sum") c.potential.type = PotentialSection::Type::gaussian_sum;
             else if (v == "quadratic") c.potential.type = PotentialSection::Type::quadratic;
             else return "expected gaussian-sum or quadratic";
             return std::nullopt;
         }},
        {"potential.dimension", [](ExperimentConfig& c, const std::string& v) { return set_int(c.potential.dimension, v); }},
        {"potential.offset", [](ExperimentConfig& c, const std::string& v) { return set_double(c.potential.offset, v); }},
        {"potential.peak", [](ExperimentConfig& c, const std::string& v) { return set_double(c.potential.peak, v); }},
        {"domain.cells",
         [](ExperimentConfig& c, const std::string& v) -> std::optional<std::string> {
             std::vector<int> cells;
             for (const auto& item : split(v, ',')) {
                 const auto i = to_int(item);
                 if (!i) return "expected integers, got '" + v + "'";
                 cells.push_back(*i);
             }
             if (cells.empty() || cells.size() > 2) return "expected one or two cell counts";
             c.domain.cells = {cells[0], cells.size() == 2 ? cells[1] : cells[0]};
             return std::nullopt;
         }},
        {"physics.chi", [](ExperimentConfig& c, const std::string& v) { return set_double(c.physics.chi, v); }},
        {"physics.d", [](ExperimentConfig& c, const std::string& v) { return set_double(c.physics.d, v); }},
        {"physics.mu", [](ExperimentConfig& c, const std::string& v) { return set_double(c.physics.mu, v); }},
        {"physics.theta", [](ExperimentConfig& c, const std::string& v) { return set_double(c.physics.theta, v); }},
        {"physics.speed_ratio", [](ExperimentConfig& c, const std::string& v) { return set_double(c.physics.speed_ratio, v); }},
        {"physics.reaction",
         [](ExperimentConfig& c, const std::string& v) -> std::optional<std::string> {
             if (v == "cubic-allee") c.physics.reaction = ReactionSpec::Kind::cubic_allee;
             else if (v == "logistic-allee") c.physics.reaction = ReactionSpec::Kind::logistic_allee;
             else if (v == "shared-competition") c.physics.reaction = ReactionSpec::Kind::shared_competition;
             else return "expected cubic-allee, logistic-allee or shared-competition";
             return std::nullopt;
         }},
        {"physics.resource",
         [](ExperimentConfig& c, const std::string& v) -> std::optional<std::string> {
             Resource r;
             const auto space = v.find(' ');
             const std::string head = v.substr(0, space);
             const std::string rest = space == std::string::npos ? "" : v.substr(space + 1);
             if (head == "unit" && rest.empty()) {
                 r.kind = Resource::Kind::unit;
             } else if (head == "exp-potential" && rest.empty()) {
                 r.kind = Resource::Kind::exp_potential;
             } else if (head == "constant") {
                 const auto d = to_double(rest);
                 if (!d) return "constant resource needs a value";
                 r.kind = Resource::Kind::constant;
                 r.a0 = *d;
             } else if (head == "affine") {
                 const auto d = to_doubles(rest);
                 if (!d || d->size() != 2) return "affine resource needs two values a0, a1";
                 r.kind = Resource::Kind::affine;
                 r.a0 = (*d)[0];
                 r.a1 = (*d)[1];
             } else {
                 return "expected unit, exp-potential, constant <r0> or affine <a0>, <a1>";
             }
             c.physics.resource = r;
             return std::nullopt;
         }},
        {"physics.strategy",
         [](ExperimentConfig& c, const std::string& v) -> std::optional<std::string> {
             if (v == "ifd") c.physics.strategy = Strategy::ifd;
             else if (v == "aggressive") c.physics.strategy = Strategy::aggressive;
             else return "expected ifd or aggressive";
             return std::nullopt;
         }},
        {"physics.branches",
         [](ExperimentConfig& c, const std::string& v) -> std::optional<std::string> {
             c.physics.branches.clear();
             try {
                 for (const auto& b : split(v, ',')) c.physics.branches.push_back(parse_branch(b));
             } catch (const std::invalid_argument& e) {
                 return std::string(e.what());
             }
             return std::nullopt;
         }},
        {"initial.u",
         [](ExperimentConfig& c, const std::string& v) -> std::optional<std::string> {
             std::string err;
             auto t = parse_initial(v, err);
             if (!t) return err;
             c.initial.u = *t;
             return std::nullopt;
         }},
        {"initial.v",
         [](ExperimentConfig& c, const std::string& v) -> std::optional<std::string> {
             std::string err;
             auto t = parse_initial(v, err);
             if (!t) return err;
             c.initial.v = *t;
             return std::nullopt;
         }},
        {"schedule.t_end", [](ExperimentConfig& c, const std::string& v) { return set_double(c.schedule.schedule.t_end, v); }},
        {"schedule.steady_tol",
         [](ExperimentConfig& c, const std::string& v) { return set_double(c.schedule.schedule.steady_tol, v); }},
        {"schedule.dt_initial",
         [](ExperimentConfig& c, const std::string& v) { return set_double(c.schedule.schedule.dt_initial, v); }},
        {"schedule.dt_max", [](ExperimentConfig& c, const std::string& v) { return set_double(c.schedule.schedule.dt_max, v); }},
        {"schedule.max_steps", [](ExperimentConfig& c, const std::string& v) { return set_int(c.schedule.schedule.max_steps, v); }},
        {"schedule.eigen_count", [](ExperimentConfig& c, const std::string& v) { return set_int(c.schedule.eigen_count, v); }},
        {"schedule.snapshots",
         [](ExperimentConfig& c, const std::string& v) -> std::optional<std::string> {
             const auto d = to_doubles(v);
             if (!d) return "expected a list of times";
             c.schedule.schedule.snapshots = *d;
             return std::nullopt;
         }},
        {"output.dir",
         [](ExperimentConfig& c, const std::string& v) -> std::optional<std::string> {
             if (v.empty()) return "must not be empty";
             c.output_dir = v;
             return std::nullopt;
         }},
        {"sweep.run",
         [](ExperimentConfig& c, const std::string& v) -> std::optional<std::string> {
             const auto m = parse_mode(v);
             if (!m || *m == Mode::sweep || *m == Mode::analyze) return "expected simulate, compete or eig";
             c.sweep.run = *m;
             return std::nullopt;
         }},
    };
    return table;
}

// Keys whose parsing depends on potential.dimension.
const std::set<std::string, std::less<>> kDeferred{"potential.gaussians", "potential.location", "potential.curvature",
                                                   "domain.lower", "domain.upper"};

std::optional<std::string> apply_deferred(ExperimentConfig& c, const std::string& key, const std::string& value) {
    const int n = c.potential.dimension;
    auto vec = [&](Vec2& target) -> std::optional<std::string> {
        const auto d = to_doubles(value);
        if (!d || static_cast<int>(d->size()) != n) return "expected " + std::to_string(n) + " number(s)";
        target = {(*d)[0], n == 2 ? (*d)[1] : 0.0};
        return std::nullopt;
    };
    if (key == "potential.location") return vec(c.potential.location);
    if (key == "potential.curvature") return vec(c.potential.curvature);
    if (key == "domain.lower") return vec(c.domain.lower);
    if (key == "domain.upper") return vec(c.domain.upper);
    c.potential.gaussians.clear();
    for (const auto& item : split(value, ';')) {
        if (item.empty()) continue;
        const auto d = to_doubles(item);
        if (!d || static_cast<int>(d->size()) != n + 2)
            return "each gaussian needs " + std::string(n == 1 ? "a, cx, sigma" : "a, cx, cy, sigma");
        GaussianBump g;
        g.amplitude = (*d)[0];
        g.center = {(*d)[1], n == 2 ? (*d)[2] : 0.0};
        g.width = d->back();
        c.potential.gaussians.push_back(g);
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::analyze: return "analyze";
        case Mode::simulate: return "simulate";
        case Mode::compete: return "compete";
        case Mode::eig: return "eig";
        case Mode::sweep: return "sweep";
    }
    return "analyze";
}

std::optional<Mode> parse_mode(std::string_view text) {
    for (Mode m : {Mode::analyze, Mode::simulate, Mode::compete, Mode::eig, Mode::sweep}) {
        if (text == to_string(m)) return m;
    }
    return std::nullopt;
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error([&] {
          std::string msg;
          for (const auto& i : issues) {
              if (!msg.empty()) msg += '\n';
              msg += i.line > 0 ? "line " + std::to_string(i.line) + ": " + i.message : i.message;
          }
          return msg;
      }()),
      issues_(std::move(issues)) {}

Potential PotentialSection::build() const {
    if (type == Type::gaussian_sum) return Potential(dimension, GaussianSum{gaussians, offset});
    return Potential(dimension, QuadraticPeak{peak, location, curvature});
}

Box ExperimentConfig::box() const {
    Box b{potential.dimension, domain.lower, domain.upper};
    if (b.dim == 1) {
        b.lower[1] = 0.0;
        b.upper[1] = 0.0;
    }
    return b;
}

Grid ExperimentConfig::grid() const { return Grid(box(), domain.cells); }

ReactionSpec ExperimentConfig::reaction() const {
    return ReactionSpec{physics.reaction, physics.mu, physics.theta, physics.resource};
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    std::vector<ConfigIssue> issues;
    std::map<std::string, int> lines;
    std::vector<std::pair<std::string, Entry>> deferred;
    std::vector<std::pair<std::string, Entry>> sweep_axes;

    std::string section;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                issues.push_back({line_no, "malformed section header '" + line + "'"});
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            if (!kSections.count(section)) {
                issues.push_back({line_no, "unknown section [" + section + "]"});
                section = "?";
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back({line_no, "expected 'key = value'"});
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section == "?") continue;
        const std::string full = section.empty() ? key : section + "." + key;
        if (lines.count(full)) {
            issues.push_back({line_no, "duplicate key '" + full + "' (first on line " + std::to_string(lines[full]) + ")"});
            continue;
        }
        lines[full] = line_no;

        if (section.empty()) {
            if (key != "mode") {
                issues.push_back({line_no, "unknown key '" + key + "' outside any section"});
                continue;
            }
            const auto m = parse_mode(value);
            if (!m) issues.push_back({line_no, "mode: expected analyze, simulate, compete, eig or sweep"});
            config.mode = m;
            continue;
        }
        if (kDeferred.count(full)) {
            deferred.emplace_back(full, Entry{value, line_no});
            continue;
        }
        if (section == "sweep" && key != "run") {
            sweep_axes.emplace_back(key, Entry{value, line_no});
            continue;
        }
        const auto it = handlers().find(full);
        if (it == handlers().end()) {
            issues.push_back({line_no, "unknown key '" + key + "' in [" + section + "]"});
            continue;
        }
        if (auto err = it->second(config, value)) issues.push_back({line_no, full + ": " + *err});
    }

    if (config.potential.dimension == 1 || config.potential.dimension == 2) {
        for (const auto& [key, entry] : deferred) {
            if (auto err = apply_deferred(config, key, entry.value)) issues.push_back({entry.line, key + ": " + *err});
        }
    }
    for (const char* required : {"physics.chi", "physics.theta"}) {
        if (!lines.count(required)) issues.push_back({0, std::string("missing required key '") + required + "'"});
    }
    if (config.potential.type == PotentialSection::Type::gaussian_sum && !lines.count("potential.gaussians"))
        issues.push_back({0, "missing required key 'potential.gaussians'"});
    if (config.potential.dimension == 1) {
        config.domain.lower[1] = config.domain.upper[1] = 0.0;
        config.potential.location[1] = config.potential.curvature[1] = 0.0;
        config.domain.cells[1] = config.domain.cells[0];
    }

    validate(config, lines, issues);

    for (const auto& [key, entry] : sweep_axes) {
        const auto values = to_doubles(entry.value);
        if (!values || values->empty()) {
            issues.push_back({entry.line, "sweep." + key + ": expected a list of numbers"});
            continue;
        }
        ExperimentConfig probe = config;
        if (!apply_sweep_value(probe, key, values->front())) {
            issues.push_back({entry.line, "unknown sweep parameter '" + key + "'"});
            continue;
        }
        for (double v : *values) {
            probe = config;
            apply_sweep_value(probe, key, v);
            std::vector<ConfigIssue> sub;
            validate(probe, {}, sub);
            for (auto& s : sub) issues.push_back({entry.line, "sweep." + key + " = " + csv::number(v) + ": " + s.message});
        }
        config.sweep.axes.push_back({key, *values});
    }

    if (!issues.empty()) {
        std::stable_sort(issues.begin(), issues.end(), [](const auto& a, const auto& b) { return a.line < b.line; });
        throw ConfigError(std::move(issues));
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({{0, "cannot read config file " + path.string()}});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

bool apply_sweep_value(ExperimentConfig& c, std::string_view key, double value) {
    if (key == "chi") c.physics.chi = value;
    else if (key == "theta") c.physics.theta = value;
    else if (key == "mu") c.physics.mu = value;
    else if (key == "d") c.physics.d = value;
    else if (key == "speed_ratio") c.physics.speed_ratio = value;
    else if (key == "t_end") c.schedule.schedule.t_end = value;
    else if (key == "steady_tol") c.schedule.schedule.steady_tol = value;
    else if (key == "cells") {
        const int cells = static_cast<int>(std::lround(value));
        c.domain.cells = {cells, cells};
    } else return false;
    return true;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    const int n = c.potential.dimension;
    auto vec = [&](const Vec2& v) { return format_list(std::span<const double>(v.data(), static_cast<std::size_t>(n))); };
    if (c.mode) out << "mode = " << to_string(*c.mode) << "\n\n";

    out << "[potential]\n";
    out << "type = " << (c.potential.type == PotentialSection::Type::gaussian_sum ? "gaussian-sum" : "quadratic") << '\n';
    out << "dimension = " << n << '\n';
    if (c.potential.type == PotentialSection::Type::gaussian_sum) {
        out << "gaussians = ";
        for (std::size_t i = 0; i < c.potential.gaussians.size(); ++i) {
            const auto& g = c.potential.gaussians[i];
            std::vector<double> row{g.amplitude, g.center[0]};
            if (n == 2) row.push_back(g.center[1]);
            row.push_back(g.width);
            out << (i ? "; " : "") << format_list(row);
        }
        out << '\n';
        out << "offset = " << csv::number(c.potential.offset) << '\n';
    } else {
        out << "peak = " << csv::number(c.potential.peak) << '\n';
        out << "location = " << vec(c.potential.location) << '\n';
        out << "curvature = " << vec(c.potential.curvature) << '\n';
    }

    out << "\n[domain]\n";
    out << "lower = " << vec(c.domain.lower) << '\n';
    out << "upper = " << vec(c.domain.upper) << '\n';
    out << "cells = " << c.domain.cells[0];
    if (n == 2) out << ", " << c.domain.cells[1];
    out << '\n';

    const auto& p = c.physics;
    out << "\n[physics]\n";
    out << "chi = " << csv::number(p.chi) << '\n';
    out << "d = " << csv::number(p.d) << '\n';
    out << "mu = " << csv::number(p.mu) << '\n';
    out << "theta = " << csv::number(p.theta) << '\n';
    out << "speed_ratio = " << csv::number(p.speed_ratio) << '\n';
    out << "reaction = " << to_string(p.reaction) << '\n';
    out << "resource = " << format_resource(p.resource) << '\n';
    out << "strategy = " << (p.strategy == Strategy::ifd ? "ifd" : "aggressive") << '\n';
    if (!p.branches.empty()) {
        out << "branches = ";
        for (std::size_t i = 0; i < p.branches.size(); ++i) out << (i ? ", " : "") << to_string(p.branches[i]);
        out << '\n';
    }

    if (!c.initial.u.empty() || !c.initial.v.empty()) {
        out << "\n[initial]\n";
        if (!c.initial.u.empty()) out << "u = " << format_initial(c.initial.u) << '\n';
        if (!c.initial.v.empty()) out << "v = " << format_initial(c.initial.v) << '\n';
    }

    const auto& s = c.schedule.schedule;
    out << "\n[schedule]\n";
    out << "t_end = " << csv::number(s.t_end) << '\n';
    out << "snapshots = " << format_list(s.snapshots) << '\n';
    out << "steady_tol = " << csv::number(s.steady_tol) << '\n';
    out << "dt_initial = " << csv::number(s.dt_initial) << '\n';
    out << "dt_max = " << csv::number(s.dt_max) << '\n';
    out << "max_steps = " << s.max_steps << '\n';
    out << "eigen_count = " << c.schedule.eigen_count << '\n';

    out << "\n[output]\ndir = " << c.output_dir << '\n';

    if (!c.sweep.axes.empty() || c.sweep.run != Mode::simulate) {
        out << "\n[sweep]\nrun = " << to_string(c.sweep.run) << '\n';
        for (const auto& axis : c.sweep.axes) out << axis.key << " = " << format_list(axis.values) << '\n';
    }
    return out.str();
}

void require_mode_inputs(const ExperimentConfig& c, Mode mode) {
    std::vector<ConfigIssue> issues;
    const bool shared = c.physics.reaction == ReactionSpec::Kind::shared_competition;
    switch (mode) {
        case Mode::analyze: break;
        case Mode::simulate:
        case Mode::eig:
            if (c.initial.u.empty()) issues.push_back({0, "initial.u is required for " + std::string(to_string(mode))});
            if (shared) issues.push_back({0, "shared-competition needs compete mode"});
            break;
        case Mode::compete:
            if (c.initial.u.empty() || c.initial.v.empty()) issues.push_back({0, "compete needs initial.u and initial.v"});
            if (!shared) issues.push_back({0, "compete needs reaction = shared-competition"});
            break;
        case Mode::sweep:
            if (c.sweep.axes.empty()) issues.push_back({0, "sweep needs at least one parameter in [sweep]"});
            else require_mode_inputs(c, c.sweep.run);
            break;
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

}  // namespace allee::harness
