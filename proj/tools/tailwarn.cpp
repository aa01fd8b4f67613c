// tailwarn command-line front end.
//
//   tailwarn <command> [--config FILE] [--key value ...]
//
// Every configuration key is also a flag (`--a_grid` or `--a-grid`). Flags
// override file values. Results go to <output>.csv (plus side tables) and
// <output>.manifest.json; errors are a JSON record on stderr.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tailwarn/tailwarn.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tailwarn;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) detail::fail("cli", Errc::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Outputs {
public:
    explicit Outputs(const RunConfig& cfg)
        : cfg_(cfg), prefix_(cfg.output.empty() ? std::string(command_name(cfg.command)) : cfg.output) {
        const fs::path parent = fs::path(prefix_).parent_path();
        if (!parent.empty()) fs::create_directories(parent);
    }

    template <class Fn>
    void write(const std::string& suffix, Fn&& fn) {
        const std::string path = prefix_ + suffix;
        std::ofstream os(path, std::ios::binary);
        if (!os) detail::fail("cli", Errc::Io, "cannot write " + path);
        fn(os);
        if (!os) detail::fail("cli", Errc::Io, "write failed for " + path);
        files_.push_back(fs::path(path).filename().string());
    }

    void manifest(json extra = json::object()) {
        json m;
        m["command"] = std::string(command_name(cfg_.command));
        m["config"] = cfg_.echo;
        m["master_seed"] = cfg_.seed;
        m["generator"] = std::string(Philox4x64::name);
        m["version"] = kVersion;
        m["files"] = files_;
        if (!extra.empty()) m["results"] = std::move(extra);
        write(".manifest.json", [&](std::ostream& os) { os << m.dump(2) << '\n'; });
    }

private:
    const RunConfig& cfg_;
    std::string prefix_;
    std::vector<std::string> files_;
};

int run_simulate(const RunConfig& cfg) {
    const MapModel m{cfg.family, cfg.a, cfg.epsilon};
    m.validate();
    double y0 = cfg.y0.value_or(0.0);
    if (!cfg.y0) {
        const auto t = truth_at(cfg.family, cfg.a, cfg.epsilon, cfg.seed_point.value_or(default_seed_point(cfg.family)));
        y0 = t.interval ? 0.5 * (t.interval->x_minus + t.interval->x_plus) : default_seed_point(cfg.family);
    }
    RngStream rng(cfg.seed, 0);
    const auto ts = generate(m, make_noise(m, cfg.noise), y0, cfg.n, rng, cfg.burn_in);
    Outputs out(cfg);
    out.write(".csv", [&](std::ostream& os) { write_series_csv(os, ts.values); });
    out.manifest();
    return 0;
}

int run_estimate(const RunConfig& cfg) {
    const auto series = read_series_file(cfg.input);
    const auto truth = truth_at(cfg.family, cfg.a, cfg.epsilon, cfg.seed_point.value_or(default_seed_point(cfg.family)));
    std::vector<EstimateRow> rows;
    for (auto bk : cfg.boundaries)
        for (auto method : cfg.methods)
            rows.push_back(estimate_row(series, cfg.a, truth, method, bk, cfg.b, cfg.q, cfg.h_min, cfg.representative, 0));
    if (cfg.output.empty()) {
        write_estimates_csv(std::cout, rows);
        return 0;
    }
    Outputs out(cfg);
    out.write(".csv", [&](std::ostream& os) { write_estimates_csv(os, rows); });
    out.manifest();
    return 0;
}

int run_sweep(const RunConfig& cfg) {
    SweepOptions opt;
    opt.n_per_a = cfg.n;
    opt.y0_first = cfg.y0.value_or(default_seed_point(cfg.family));
    opt.burn_in_first = cfg.burn_in;
    opt.margin = -1.0;
    const auto t = truth_at(cfg.family, cfg.a_grid.front(), cfg.epsilon, opt.y0_first);
    if (t.interval) {
        opt.tipping_reference = *t.interval;
        opt.margin = cfg.margin_fraction * t.interval->width();
    }
    RngStream rng(cfg.seed, 0);
    const auto r = continuation_sweep(cfg.family, cfg.epsilon, cfg.noise, cfg.a_grid, opt, rng);
    Outputs out(cfg);
    out.write(".csv", [&](std::ostream& os) { write_sweep_csv(os, r); });
    out.manifest();
    return 0;
}

int run_ulam(const RunConfig& cfg) {
    const MapModel m{cfg.family, cfg.a, cfg.epsilon};
    m.validate();
    const auto iv = minimal_invariant_interval(m, cfg.seed_point.value_or(default_seed_point(cfg.family)));
    const auto u = ulam_density(m, make_noise(m, cfg.noise), iv, cfg.bins, UlamOptions{cfg.tol, cfg.max_iterations});
    Outputs out(cfg);
    out.write(".csv", [&](std::ostream& os) { write_density_csv(os, u); });
    json res;
    res["x_minus"] = iv.x_minus;
    res["x_plus"] = iv.x_plus;
    res["lambda_true"] = lambda_true(m, iv);
    res["residual"] = u.residual;
    res["iterations"] = u.iterations;
    out.manifest(res);
    return 0;
}

int run_fold(const RunConfig& cfg) {
    const auto fp = solve_fold(cfg.family, cfg.epsilon, cfg.side);
    std::ostringstream ss;
    CsvWriter w(ss);
    w.row("x_star", "a_star", "value_residual", "derivative_residual");
    w.row(fp.x_star, fp.a_star, fp.value_residual, fp.derivative_residual);
    std::cout << ss.str();
    if (!cfg.output.empty()) {
        Outputs out(cfg);
        out.write(".csv", [&](std::ostream& os) { os << ss.str(); });
        out.manifest();
    }
    return 0;
}

int run_grid(const RunConfig& cfg) {
    const auto r = run_grid_study(grid_spec(cfg));
    Outputs out(cfg);
    out.write(".csv", [&](std::ostream& os) { write_estimates_csv(os, r.rows); });
    out.write(".summary.csv", [&](std::ostream& os) { write_summary_csv(os, r.summary); });
    out.manifest();
    return 0;
}

int run_variance(const RunConfig& cfg) {
    const auto spec = variance_spec(cfg);
    const auto r = run_variance_demo(spec);
    Outputs out(cfg);
    out.write(".csv", [&](std::ostream& os) { write_variance_csv(os, r); });
    out.write(".summary.csv", [&](std::ostream& os) { write_variance_summary_csv(os, r, spec.methods); });
    out.write(".tipping.csv", [&](std::ostream& os) { write_tipping_csv(os, r); });
    if (spec.ulam) out.write(".ulam.csv", [&](std::ostream& os) { write_estimates_csv(os, r.ulam_rows); });
    json res;
    res["a_star"] = r.a_star;
    res["reference_x_minus"] = r.reference.x_minus;
    res["reference_x_plus"] = r.reference.x_plus;
    res["margin"] = r.margin;
    out.manifest(res);
    return 0;
}

int run_rmse(const RunConfig& cfg) {
    const auto r = run_rmse_sweep(rmse_spec(cfg));
    Outputs out(cfg);
    out.write(".csv", [&](std::ostream& os) { write_estimates_csv(os, r.rows); });
    out.write(".rmse.csv", [&](std::ostream& os) { write_rmse_csv(os, r.table); });
    out.manifest();
    return 0;
}

int run_boundary(const RunConfig& cfg) {
    const auto r = run_boundary_study(boundary_spec(cfg));
    Outputs out(cfg);
    out.write(".csv", [&](std::ostream& os) { write_boundary_csv(os, r.rows); });
    out.write(".slopes.csv", [&](std::ostream& os) { write_boundary_slopes_csv(os, r); });
    out.manifest();
    return 0;
}

int dispatch(const RunConfig& cfg) {
    switch (cfg.command) {
    case Command::Simulate: return run_simulate(cfg);
    case Command::Estimate: return run_estimate(cfg);
    case Command::Sweep: return run_sweep(cfg);
    case Command::Ulam: return run_ulam(cfg);
    case Command::Fold: return run_fold(cfg);
    case Command::GridStudy: return run_grid(cfg);
    case Command::VarianceDemo: return run_variance(cfg);
    case Command::RmseSweep: return run_rmse(cfg);
    case Command::BoundaryStudy: return run_boundary(cfg);
    }
    return 1;
}

void report(const std::string& code, const std::string& message, const std::string& key = {}) {
    json e;
    e["code"] = code;
    e["message"] = message;
    if (!key.empty()) e["key"] = key;
    std::cerr << json{{"error", e}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tail-based early-warning estimators for bounded-noise random maps"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    struct Sub {
        Command command;
        CLI::App* app;
        std::string config;
        std::map<std::string, std::string> values;
        std::map<std::string, CLI::Option*> options;
    };
    std::vector<Sub> subs;
    subs.reserve(std::size(kCommands));
    for (const auto& [command, name] : kCommands) {
        auto& s = subs.emplace_back();
        s.command = command;
        s.app = app.add_subcommand(std::string(name));
        s.app->add_option("--config,--spec", s.config, "flat key = value configuration file");
        for (const auto& k : config_detail::kKeys) {
            if (k.name == "command") continue;
            std::string flags = "--" + std::string(k.name);
            std::string dashed(k.name);
            std::replace(dashed.begin(), dashed.end(), '_', '-');
            if (dashed != k.name) flags += ",--" + dashed;
            s.options[std::string(k.name)] = s.app->add_option(flags, s.values[std::string(k.name)]);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ExtrasError& e) {
        report("cli.UnknownKey", e.what());
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        report("cli.TypeMismatch", e.what());
        return 2;
    }

    try {
        for (auto& s : subs) {
            if (!s.app->parsed()) continue;
            ConfigEntries file;
            if (!s.config.empty()) file = parse_config_text(slurp(s.config));
            ConfigEntries overrides;
            for (const auto& [key, opt] : s.options)
                if (opt->count() > 0) overrides.emplace_back(key, s.values[key]);
            const RunConfig cfg = make_config(s.command, file, overrides);
            return dispatch(cfg);
        }
    } catch (const ConfigError& e) {
        report(e.qualified(), e.what(), e.key());
        return 2;
    } catch (const Error& e) {
        report(e.qualified(), e.what());
        return 1;
    } catch (const std::exception& e) {
        report("cli.Io", e.what());
        return 1;
    }
    return 1;
}
