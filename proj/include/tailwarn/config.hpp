#pragma once

// Flat key = value run configuration.
//
// File syntax: one `key = value` per line, `#` starts a comment. Values are
// reals, integers (1e5 is accepted when it is an exact integer), names, or
// lists. Grids accept `v1, v2, ...`, `range(lo, step, hi)` or
// `linspace(lo, hi, count)`. Overrides (command-line flags) replace file
// values; both are validated key by key before anything runs.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tailwarn/density.hpp"
#include "tailwarn/dynamics.hpp"
#include "tailwarn/error.hpp"
#include "tailwarn/estimator.hpp"
#include "tailwarn/experiments.hpp"
#include "tailwarn/noise.hpp"

namespace tailwarn {

enum class Command { Simulate, Estimate, Sweep, Ulam, Fold, GridStudy, VarianceDemo, RmseSweep, BoundaryStudy };

inline constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::Simulate, "simulate"},       {Command::Estimate, "estimate"},
    {Command::Sweep, "sweep"},             {Command::Ulam, "ulam"},
    {Command::Fold, "fold"},               {Command::GridStudy, "grid-study"},
    {Command::VarianceDemo, "variance-demo"}, {Command::RmseSweep, "rmse-sweep"},
    {Command::BoundaryStudy, "boundary-study"},
};

constexpr std::string_view command_name(Command c) noexcept {
    for (const auto& [k, name] : kCommands)
        if (k == c) return name;
    return "?";
}

/// Configuration error that names the offending key.
class ConfigError : public Error {
public:
    ConfigError(Errc code, std::string key, const std::string& what)
        : Error("cli", code, key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct RunConfig {
    Command command = Command::Estimate;
    Family family = Family::Linear;
    NoiseKind noise = NoiseKind::Uniform;
    double epsilon = 0.1;
    double a = 0.5;
    std::vector<double> a_grid;
    std::vector<double> lambdas;
    std::size_t n = 100'000;
    std::size_t b = 200;
    double q = 0.3;
    HMinRule h_min;
    std::vector<BoundaryMode::Kind> boundaries;
    std::vector<Method> methods;
    Representative representative = Representative::Midpoint;
    std::size_t realizations = 100;
    std::uint64_t seed = 1;
    std::optional<double> y0;
    std::size_t burn_in = 1000;
    std::optional<double> seed_point;
    Protocol protocol = Protocol::Independent;
    unsigned jobs = 1;
    std::string output;
    std::string input;
    Side side = Side::Lower;
    std::size_t bins = 4096;
    double tol = 1e-10;
    std::size_t max_iterations = 100'000;
    std::vector<std::size_t> b_values;
    std::vector<double> q_values;
    std::size_t offsets = 20;
    double offset_span = 100.0;
    double margin_fraction = 0.05;
    bool ulam = false;
    std::size_t ulam_bins = 8192;
    double ulam_q = 1e-4;
    double ulam_h_min = 0.0;

    /// Effective value text of every key, after defaults and overrides.
    std::map<std::string, std::string> echo;
};

namespace config_detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

[[noreturn]] inline void mismatch(const std::string& key, std::string_view text, std::string_view expected) {
    throw ConfigError(Errc::TypeMismatch, key, "expected " + std::string(expected) + ", got '" + std::string(text) + "'");
}

[[noreturn]] inline void range(const std::string& key, const std::string& what) {
    throw ConfigError(Errc::RangeViolation, key, what);
}

inline double to_real(const std::string& key, std::string_view text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) mismatch(key, text, "a real number");
    if (!std::isfinite(v)) range(key, "value must be finite");
    return v;
}

inline std::uint64_t to_uint(const std::string& key, std::string_view text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (!t.empty() && ec == std::errc() && ptr == t.data() + t.size()) return v;
    // scientific notation for exact integers, e.g. 1e5
    double d = 0.0;
    auto [p2, e2] = std::from_chars(t.data(), t.data() + t.size(), d);
    if (t.empty() || e2 != std::errc() || p2 != t.data() + t.size() || d != std::floor(d))
        mismatch(key, text, "a non-negative integer");
    if (d < 0.0 || d > 9.0e15) range(key, "integer out of range");
    return static_cast<std::uint64_t>(d);
}

inline bool to_bool(const std::string& key, std::string_view text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    mismatch(key, text, "a boolean");
}

// Strips `name(` ... `)` and returns the argument text, if `t` has that form.
inline std::optional<std::string> call_args(const std::string& t, std::string_view name) {
    if (t.size() > name.size() + 1 && t.compare(0, name.size(), name) == 0 && t[name.size()] == '(' &&
        t.back() == ')')
        return t.substr(name.size() + 1, t.size() - name.size() - 2);
    return std::nullopt;
}

inline std::vector<double> to_grid(const std::string& key, std::string_view text) {
    const std::string t = trim(text);
    if (t.empty()) return {};
    if (auto args = call_args(t, "range")) {
        const auto p = split(*args, ',');
        if (p.size() != 3) mismatch(key, text, "range(lo, step, hi)");
        const double lo = to_real(key, p[0]), step = to_real(key, p[1]), hi = to_real(key, p[2]);
        if (!(step > 0.0) || !(hi >= lo)) range(key, "range needs step > 0 and hi >= lo");
        return step_grid(lo, step, hi);
    }
    if (auto args = call_args(t, "linspace")) {
        const auto p = split(*args, ',');
        if (p.size() != 3) mismatch(key, text, "linspace(lo, hi, count)");
        const double lo = to_real(key, p[0]), hi = to_real(key, p[1]);
        const auto count = to_uint(key, p[2]);
        if (count < 1 || !(hi >= lo)) range(key, "linspace needs count >= 1 and hi >= lo");
        return linspace(lo, hi, count);
    }
    std::vector<double> out;
    for (const auto& part : split(t, ',')) out.push_back(to_real(key, part));
    return out;
}

template <class Enum, std::size_t N>
Enum to_enum(const std::string& key, std::string_view text, const std::pair<Enum, std::string_view> (&table)[N]) {
    const std::string t = trim(text);
    for (const auto& [value, name] : table)
        if (t == name) return value;
    std::string expected = "one of";
    for (const auto& [value, name] : table) expected += " " + std::string(name);
    mismatch(key, text, expected);
}

inline constexpr std::pair<Family, std::string_view> kFamilies[] = {
    {Family::Linear, "linear"}, {Family::TanhShift, "tanh-shift"}, {Family::ModifiedTanh, "modified-tanh"}};
inline constexpr std::pair<NoiseKind, std::string_view> kNoises[] = {
    {NoiseKind::Uniform, "uniform"}, {NoiseKind::TruncatedNormal, "truncated-normal"}};
inline constexpr std::pair<BoundaryMode::Kind, std::string_view> kBoundaries[] = {
    {BoundaryMode::Kind::TrueBoundary, "true"}, {BoundaryMode::Kind::EstimatedFromData, "estimated"}};
inline constexpr std::pair<Method, std::string_view> kMethods[] = {
    {Method::LeadingOrder, "leading"}, {Method::HigherOrder, "higher"}, {Method::Interval, "interval"}};
inline constexpr std::pair<Representative, std::string_view> kRepresentatives[] = {
    {Representative::Midpoint, "midpoint"}, {Representative::LeftEdge, "left"}, {Representative::RightEdge, "right"}};
inline constexpr std::pair<Protocol, std::string_view> kProtocols[] = {
    {Protocol::Independent, "independent"}, {Protocol::Continuation, "continuation"}};
inline constexpr std::pair<Side, std::string_view> kSides[] = {{Side::Lower, "lower"}, {Side::Upper, "upper"}};

template <class Enum, std::size_t N>
std::vector<Enum> to_enum_list(const std::string& key, std::string_view text,
                               const std::pair<Enum, std::string_view> (&table)[N]) {
    std::vector<Enum> out;
    for (const auto& part : split(text, ',')) {
        const Enum v = to_enum(key, part, table);
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    return out;
}

inline std::optional<double> to_auto_real(const std::string& key, std::string_view text) {
    if (trim(text) == "auto") return std::nullopt;
    return to_real(key, text);
}

inline void positive(const std::string& key, double v) {
    if (!(v > 0.0)) range(key, "must be > 0");
}

inline void at_least(const std::string& key, std::uint64_t v, std::uint64_t lo) {
    if (v < lo) range(key, "must be >= " + std::to_string(lo));
}

inline void open_unit(const std::string& key, double v) {
    if (!(v > 0.0 && v < 1.0)) range(key, "must lie in (0, 1)");
}

using Setter = void (*)(RunConfig&, const std::string&, const std::string&);

struct KeyDef {
    std::string_view name;
    std::string_view fallback;  // default text for every command
    Setter set;
};

// clang-format off
inline const KeyDef kKeys[] = {
    {"command", "estimate", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.command = to_enum(k, v, kCommands); }},
    {"family", "linear", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.family = to_enum(k, v, kFamilies); }},
    {"noise", "uniform", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.noise = to_enum(k, v, kNoises); }},
    {"epsilon", "0.1", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.epsilon = to_real(k, v); positive(k, c.epsilon); }},
    {"a", "0.5", [](RunConfig& c, const std::string& k, const std::string& v) { c.a = to_real(k, v); }},
    {"a_grid", "", [](RunConfig& c, const std::string& k, const std::string& v) { c.a_grid = to_grid(k, v); }},
    {"lambdas", "0.24, 0.42, 0.65, 0.8", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.lambdas = to_grid(k, v);
        for (double l : c.lambdas) open_unit(k, l); }},
    {"n", "1e5", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.n = to_uint(k, v); at_least(k, c.n, 2); }},
    {"b", "200", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.b = to_uint(k, v); at_least(k, c.b, 2); }},
    {"q", "0.3", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.q = to_real(k, v); open_unit(k, c.q); }},
    {"h_min_fraction", "0.01", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.h_min.fraction = to_real(k, v);
        if (!(c.h_min.fraction >= 0.0 && c.h_min.fraction < 1.0)) range(k, "must lie in [0, 1)"); }},
    {"h_min", "auto", [](RunConfig& c, const std::string& k, const std::string& v) {
        const auto x = to_auto_real(k, v);
        if (x && *x < 0.0) range(k, "must be >= 0");
        c.h_min.absolute = x.value_or(-1.0); }},
    {"boundary", "estimated", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.boundaries = to_enum_list(k, v, kBoundaries); }},
    {"method", "leading", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.methods = to_enum_list(k, v, kMethods); }},
    {"representative", "midpoint", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.representative = to_enum(k, v, kRepresentatives); }},
    {"realizations", "100", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.realizations = to_uint(k, v); at_least(k, c.realizations, 1); }},
    {"seed", "1", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_uint(k, v); }},
    {"y0", "auto", [](RunConfig& c, const std::string& k, const std::string& v) { c.y0 = to_auto_real(k, v); }},
    {"burn_in", "1000", [](RunConfig& c, const std::string& k, const std::string& v) { c.burn_in = to_uint(k, v); }},
    {"seed_point", "auto", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.seed_point = to_auto_real(k, v); }},
    {"protocol", "independent", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.protocol = to_enum(k, v, kProtocols); }},
    {"jobs", "1", [](RunConfig& c, const std::string& k, const std::string& v) {
        const auto j = to_uint(k, v);
        if (j > 1024) range(k, "must be <= 1024");
        c.jobs = static_cast<unsigned>(j); }},
    {"output", "", [](RunConfig& c, const std::string&, const std::string& v) { c.output = trim(v); }},
    {"input", "", [](RunConfig& c, const std::string&, const std::string& v) { c.input = trim(v); }},
    {"side", "lower", [](RunConfig& c, const std::string& k, const std::string& v) { c.side = to_enum(k, v, kSides); }},
    {"bins", "4096", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.bins = to_uint(k, v); at_least(k, c.bins, 2); }},
    {"tol", "1e-10", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.tol = to_real(k, v); positive(k, c.tol); }},
    {"max_iterations", "1e5", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.max_iterations = to_uint(k, v); at_least(k, c.max_iterations, 1); }},
    {"b_values", "auto", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.b_values.clear();
        if (trim(v) == "auto") return;
        for (double x : to_grid(k, v)) {
            if (x != std::floor(x) || x < 2.0) range(k, "bin counts must be integers >= 2");
            c.b_values.push_back(static_cast<std::size_t>(x));
        } }},
    {"q_values", "auto", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.q_values.clear();
        if (trim(v) == "auto") return;
        c.q_values = to_grid(k, v);
        for (double x : c.q_values) open_unit(k, x); }},
    {"offsets", "20", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.offsets = to_uint(k, v); at_least(k, c.offsets, 2); }},
    {"offset_span", "100", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.offset_span = to_real(k, v);
        if (!(c.offset_span > 1.0)) range(k, "must be > 1"); }},
    {"margin_fraction", "0.05", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.margin_fraction = to_real(k, v);
        if (!(c.margin_fraction >= 0.0)) range(k, "must be >= 0"); }},
    {"ulam", "false", [](RunConfig& c, const std::string& k, const std::string& v) { c.ulam = to_bool(k, v); }},
    {"ulam_bins", "8192", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.ulam_bins = to_uint(k, v); at_least(k, c.ulam_bins, 2); }},
    {"ulam_q", "1e-4", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.ulam_q = to_real(k, v); open_unit(k, c.ulam_q); }},
    {"ulam_h_min", "0", [](RunConfig& c, const std::string& k, const std::string& v) {
        c.ulam_h_min = to_real(k, v);
        if (c.ulam_h_min < 0.0) range(k, "must be >= 0"); }},
};
// clang-format on

inline const KeyDef* find_key(std::string_view name) {
    for (const auto& k : kKeys)
        if (k.name == name) return &k;
    return nullptr;
}

// Command-specific defaults that differ from the generic ones.
inline std::vector<std::pair<std::string_view, std::string_view>> command_defaults(Command c) {
    switch (c) {
    case Command::Fold: return {{"family", "tanh-shift"}};
    case Command::GridStudy: return {{"a_grid", "linspace(0.1, 0.9, 101)"}};
    case Command::Sweep:
        return {{"family", "tanh-shift"}, {"a_grid", "range(-0.5, 0.01, 0.5)"}, {"y0", "3"}};
    case Command::VarianceDemo:
        return {{"family", "modified-tanh"}, {"epsilon", "0.8"}, {"a_grid", "range(0, 0.01, 0.8)"},
                {"n", "1e6"}, {"q", "0.1"}, {"realizations", "10"}, {"y0", "3"}, {"burn_in", "100"},
                {"method", "leading, higher"}};
    case Command::RmseSweep:
        return {{"family", "tanh-shift"}, {"a_grid", "range(-0.5, 0.01, 0.31)"}, {"realizations", "10"},
                {"method", "leading, higher"}};
    case Command::BoundaryStudy: return {{"method", "leading, higher"}};
    default: return {};
    }
}

}  // namespace config_detail

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Parses the flat file format into (key, value) pairs without interpreting
/// values. Unknown keys are rejected here, with their line number.
inline ConfigEntries parse_config_text(std::string_view text) {
    ConfigEntries out;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = config_detail::trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(Errc::TypeMismatch, t, "line " + std::to_string(line_no) + " is not key = value");
        std::string key = config_detail::trim(std::string_view(t).substr(0, eq));
        std::replace(key.begin(), key.end(), '-', '_');
        if (!config_detail::find_key(key)) throw ConfigError(Errc::UnknownKey, key, "unknown configuration key");
        out.emplace_back(key, config_detail::trim(std::string_view(t).substr(eq + 1)));
    }
    return out;
}

/// Builds a validated RunConfig. Precedence, lowest first: generic defaults,
/// command defaults, file entries, overrides. If `command` is given it must
/// agree with any `command` entry in the file.
inline RunConfig make_config(std::optional<Command> command, const ConfigEntries& file,
                             const ConfigEntries& overrides = {}) {
    std::map<std::string, std::string> values;
    for (const auto& k : config_detail::kKeys) values[std::string(k.name)] = std::string(k.fallback);

    auto check_key = [](std::string key) {
        std::replace(key.begin(), key.end(), '-', '_');
        if (!config_detail::find_key(key)) throw ConfigError(Errc::UnknownKey, key, "unknown configuration key");
        return key;
    };
    std::map<std::string, std::string> given;
    for (const auto& [k, v] : file) given[check_key(k)] = v;
    for (const auto& [k, v] : overrides) given[check_key(k)] = v;

    // resolve the command first, since it selects the defaults
    RunConfig probe;
    if (auto it = given.find("command"); it != given.end()) {
        config_detail::find_key("command")->set(probe, "command", it->second);
        if (command && *command != probe.command)
            throw ConfigError(Errc::RangeViolation, "command",
                              "config is for '" + std::string(command_name(probe.command)) + "', not '" +
                                  std::string(command_name(*command)) + "'");
    } else if (command) {
        probe.command = *command;
    }
    values["command"] = std::string(command_name(probe.command));
    for (const auto& [k, v] : config_detail::command_defaults(probe.command)) values[std::string(k)] = v;
    for (const auto& [k, v] : given) values[k] = v;

    RunConfig cfg;
    for (const auto& k : config_detail::kKeys) k.set(cfg, std::string(k.name), values[std::string(k.name)]);
    cfg.echo = values;

    // cross-field checks
    if (cfg.family == Family::Linear && given.count("a") && !(cfg.a > 0.0 && cfg.a < 1.0))
        config_detail::range("a", "linear family requires 0 < a < 1");
    if (cfg.family == Family::Linear)
        for (double a : cfg.a_grid)
            if (!(a > 0.0 && a < 1.0)) config_detail::range("a_grid", "linear family requires 0 < a < 1");
    const bool grid_command = cfg.command == Command::GridStudy || cfg.command == Command::VarianceDemo ||
                              cfg.command == Command::RmseSweep || cfg.command == Command::Sweep;
    if (grid_command && cfg.a_grid.empty()) config_detail::range("a_grid", "grid must not be empty");
    if ((cfg.command == Command::Sweep || cfg.command == Command::VarianceDemo ||
         cfg.protocol == Protocol::Continuation) &&
        !std::is_sorted(cfg.a_grid.begin(), cfg.a_grid.end(), std::less_equal<>()))
        config_detail::range("a_grid", "continuation needs a strictly increasing grid");
    if (cfg.command == Command::BoundaryStudy &&
        std::find(cfg.methods.begin(), cfg.methods.end(), Method::Interval) != cfg.methods.end())
        config_detail::range("method", "boundary study needs a fitting method");
    if (cfg.command == Command::Estimate && cfg.input.empty())
        config_detail::range("input", "estimate needs an input series file");
    if (cfg.n < cfg.b && (cfg.command == Command::Estimate || grid_command || cfg.command == Command::BoundaryStudy))
        config_detail::range("n", "series length must be at least the bin count");
    return cfg;
}

inline std::string config_key_list() {
    std::string s;
    for (const auto& k : config_detail::kKeys) {
        if (!s.empty()) s += ", ";
        s += k.name;
    }
    return s;
}

// ---------------------------------------------------------------------------
// RunConfig -> study specifications

inline GridStudySpec grid_spec(const RunConfig& c) {
    GridStudySpec s;
    s.family = c.family;
    s.noise = c.noise;
    s.epsilon = c.epsilon;
    s.a_grid = c.a_grid;
    s.n = c.n;
    s.b = c.b;
    s.q = c.q;
    s.h_min = c.h_min;
    s.representative = c.representative;
    s.boundaries = c.boundaries;
    s.methods = c.methods;
    s.realizations = c.realizations;
    s.master_seed = c.seed;
    s.y0 = c.y0;
    s.burn_in = c.burn_in;
    s.seed_point = c.seed_point;
    s.protocol = c.protocol;
    s.jobs = c.jobs;
    return s;
}

inline VarianceDemoSpec variance_spec(const RunConfig& c) {
    VarianceDemoSpec s;
    s.family = c.family;
    s.noise = c.noise;
    s.epsilon = c.epsilon;
    s.a_grid = c.a_grid;
    s.n = c.n;
    s.realizations = c.realizations;
    s.master_seed = c.seed;
    s.y0 = c.y0.value_or(default_seed_point(c.family));
    s.burn_in = c.burn_in;
    s.b = c.b;
    s.q = c.q;
    s.h_min = c.h_min;
    s.representative = c.representative;
    s.boundary = c.boundaries.front();
    s.methods = c.methods;
    s.margin_fraction = c.margin_fraction;
    s.ulam = c.ulam;
    s.ulam_bins = c.ulam_bins;
    s.ulam_q = c.ulam_q;
    s.ulam_h_min = HMinRule{0.01, c.ulam_h_min};
    s.jobs = c.jobs;
    return s;
}

inline RmseSweepSpec rmse_spec(const RunConfig& c) {
    RmseSweepSpec s;
    s.family = c.family;
    s.noise = c.noise;
    s.epsilon = c.epsilon;
    s.a_grid = c.a_grid;
    s.n = c.n;
    s.b_values = c.b_values.empty() ? std::vector<std::size_t>{c.b} : c.b_values;
    s.q_values = c.q_values.empty() ? std::vector<double>{c.q} : c.q_values;
    s.methods = c.methods;
    s.boundary = c.boundaries.front();
    s.h_min = c.h_min;
    s.representative = c.representative;
    s.realizations = c.realizations;
    s.master_seed = c.seed;
    s.burn_in = c.burn_in;
    s.seed_point = c.seed_point;
    s.jobs = c.jobs;
    return s;
}

inline BoundaryStudySpec boundary_spec(const RunConfig& c) {
    BoundaryStudySpec s;
    s.family = c.family;
    s.noise = c.noise;
    s.epsilon = c.epsilon;
    s.lambdas = c.lambdas;
    s.n = c.n;
    s.b = c.b;
    s.q = c.q;
    s.h_min = c.h_min;
    s.representative = c.representative;
    s.methods = c.methods;
    s.realizations = c.realizations;
    s.offsets = c.offsets;
    s.offset_span = c.offset_span;
    s.master_seed = c.seed;
    s.burn_in = c.burn_in;
    s.seed_point = c.seed_point;
    s.jobs = c.jobs;
    return s;
}

}  // namespace tailwarn
