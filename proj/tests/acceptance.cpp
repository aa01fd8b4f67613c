// Acceptance checks. Each criterion prints one "criterion N: PASS|FAIL ..."
// line and the exit status is nonzero on FAIL.
//
//   acceptance --criterion N [--smoke] [--jobs J]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tailwarn/tailwarn.hpp"

namespace fs = std::filesystem;
using namespace tailwarn;

namespace {

unsigned g_jobs = 0;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

RunConfig load(const std::string& name, const ConfigEntries& overrides = {}) {
    std::ifstream in(std::string(TAILWARN_REPRODUCE) + "/" + name);
    if (!in) throw std::runtime_error("missing reproduce config " + name);
    std::stringstream ss;
    ss << in.rdbuf();
    ConfigEntries over = overrides;
    over.emplace_back("jobs", std::to_string(g_jobs));
    return make_config(std::nullopt, parse_config_text(ss.str()), over);
}

bool near_a(double x, double a) { return std::abs(x - a) < 1e-9; }

Verdict criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto fp = solve_fold(Family::TanhShift, 0.1, Side::Lower);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto mt = solve_fold(Family::ModifiedTanh, 0.8, Side::Lower);
    const double da = std::abs(fp.a_star - 0.315100), dx = std::abs(fp.x_star - std::log(2.0 + std::sqrt(3.0)));
    const bool ok = da <= 1e-6 && dx <= 1e-6 && secs < 1.0 && mt.a_star >= 0.170 && mt.a_star <= 0.180;
    return {ok, "a*=" + fmt(fp.a_star, 10) + " |a*-0.315100|=" + fmt(da) + " |x*-ln(2+sqrt3)|=" + fmt(dx) +
                    " time=" + fmt(secs) + "s modified-tanh a*=" + fmt(mt.a_star, 6)};
}

Verdict criterion2() {
    const auto r = run_grid_study(grid_spec(load("fig4.cfg", {{"method", "leading"}})));
    double worst = 0.0, total = 0.0;
    std::size_t cells = 0;
    for (const auto& c : r.summary) {
        worst = std::max(worst, c.mean_abs_error);
        total += c.mean_abs_error;
        ++cells;
        if (!std::isfinite(c.mean_abs_error)) worst = INFINITY;
    }
    const double overall = total / static_cast<double>(cells);
    return {worst <= 0.15 && overall <= 0.10, "max per-lambda mean error=" + fmt(worst) + " (<=0.15) overall=" +
                                                  fmt(overall) + " (<=0.10) cells=" + std::to_string(cells)};
}

Verdict criterion3() {
    const auto r = run_grid_study(grid_spec(load("fig5.cfg")));
    double worst = 0.0;
    std::size_t cells = 0, skipped = 0;
    for (const auto& c : r.summary) {
        if (!std::isfinite(c.lambda_true)) {
            ++skipped;
            continue;
        }
        ++cells;
        worst = std::max(worst, std::isfinite(c.mean_abs_error) ? c.mean_abs_error : INFINITY);
    }
    return {cells > 0 && worst < 0.13, "max per-cell mean error=" + fmt(worst) + " (<0.13) cells=" +
                                           std::to_string(cells) + " without truth=" + std::to_string(skipped)};
}

RmseValue rmse_method(const std::vector<EstimateRow>& rows, Method m, double lambda_cap = INFINITY) {
    return rmse_where(rows, [&](const EstimateRow& r) { return r.method == m && r.lambda_true <= lambda_cap; });
}

Verdict criterion4() {
    const auto r = run_grid_study(grid_spec(load("fig6.cfg")));
    const auto lo = rmse_method(r.rows, Method::LeadingOrder), hi = rmse_method(r.rows, Method::HigherOrder);
    return {hi.rmse < lo.rmse, "higher RMSE=" + fmt(hi.rmse) + " leading RMSE=" + fmt(lo.rmse) + " (rows " +
                                   std::to_string(hi.used) + "/" + std::to_string(lo.used) + ")"};
}

Verdict criterion5() {
    const auto r = run_grid_study(grid_spec(load("fig7.cfg")));
    const auto lo = rmse_method(r.rows, Method::LeadingOrder, 0.7 + 1e-12);
    const auto iv = rmse_method(r.rows, Method::Interval, 0.7 + 1e-12);
    const auto hi = rmse_method(r.rows, Method::HigherOrder, 0.7 + 1e-12);
    return {lo.rmse < iv.rmse, "lambda<=0.7: leading RMSE=" + fmt(lo.rmse) + " interval RMSE=" + fmt(iv.rmse) +
                                   " (higher " + fmt(hi.rmse) + ", interval failures " + std::to_string(iv.skipped) +
                                   ")"};
}

Verdict criterion6() {
    bool ok = true;
    std::string detail;
    for (const char* cfg : {"fig18.cfg", "fig19.cfg"}) {
        const auto c = load(cfg);
        const auto r = run_boundary_study(boundary_spec(c));
        detail += std::string(cfg) + ":";
        for (const auto& s : r.slopes) {
            const bool in = s.pooled_slope >= 0.95 && s.pooled_slope <= 1.20;
            ok = ok && in;
            detail += " " + std::string(method_name(s.method)) + "@" + fmt(s.lambda_true, 2) + "=" +
                      fmt(s.pooled_slope) + (in ? "" : "!");
        }
        detail += " ";
    }
    return {ok, "pooled log-log slopes in [0.95,1.20]: " + detail};
}

Verdict criterion7(bool smoke) {
    const auto cfg = load(smoke ? "fig2_smoke.cfg" : "fig2.cfg");
    const auto spec = variance_spec(cfg);
    const auto r = run_variance_demo(spec);
    std::vector<double> a, var;
    double lam0 = kNaN, lam17 = kNaN;
    std::size_t lead = 0;
    for (std::size_t k = 0; k < spec.methods.size(); ++k)
        if (spec.methods[k] == Method::LeadingOrder) lead = k;
    for (const auto& s : r.summary) {
        if (s.a <= 0.5 + 1e-9) {
            a.push_back(s.a);
            var.push_back(s.mean_variance);
        }
        if (near_a(s.a, 0.0)) lam0 = s.mean_lambda_hat[lead];
        if (near_a(s.a, 0.17)) lam17 = s.mean_lambda_hat[lead];
    }
    const double slope = ols_slope(a, var);
    const double rise = lam17 - lam0;
    bool tip_ok = !r.tipping_parameter.empty();
    std::string tips;
    for (double t : r.tipping_parameter) {
        tip_ok = tip_ok && t >= 0.5 && t <= 0.8;
        tips += (tips.empty() ? "" : ",") + fmt(t, 3);
    }
    const bool ok = slope <= 0.0 && rise >= 0.1 && tip_ok;
    return {ok, std::string(smoke ? "[n=1e5] " : "[n=1e6] ") + "variance slope on [0,0.5]=" + fmt(slope) +
                    " (<=0) lambda_hat(0.17)-lambda_hat(0)=" + fmt(lam17, 4) + "-" + fmt(lam0, 4) + "=" +
                    fmt(rise) + " (>=0.1) tipping=[" + tips + "] (in [0.5,0.8])"};
}

Verdict criterion8() {
    const MapModel m{Family::Linear, 0.5, 0.1};
    const auto nm = make_noise(m, NoiseKind::Uniform);
    const InvariantInterval iv = minimal_invariant_interval(m, 0.0);
    const std::size_t bins = 4096;
    const auto u = ulam_density(m, nm, iv, bins);

    RngStream rng(1, 0);
    const auto ts = generate(m, nm, 0.0, 10'000'000, rng, 1000);
    std::vector<double> counts(bins, 0.0);
    const double w = (iv.x_plus - iv.x_minus) / static_cast<double>(bins);
    for (double y : ts.values) {
        auto i = static_cast<std::ptrdiff_t>(std::floor((y - iv.x_minus) / w));
        i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(bins) - 1);
        counts[static_cast<std::size_t>(i)] += 1.0;
    }
    double peak = 0.0, sup = 0.0, asym = 0.0;
    for (std::size_t i = 0; i < bins; ++i) {
        peak = std::max(peak, u.heights[i]);
        sup = std::max(sup, std::abs(u.heights[i] - counts[i] / (static_cast<double>(ts.values.size()) * w)));
        asym = std::max(asym, std::abs(u.heights[i] - u.heights[bins - 1 - i]));
    }
    const double ratio = tail_asymptotics_check(u, 0.5, {1, 64});
    const bool ok = sup <= 0.05 * peak && asym <= 1e-3 && ratio >= 0.7 && ratio <= 1.3;
    return {ok, "sup|ulam-hist|=" + fmt(sup) + " (<=" + fmt(0.05 * peak) + ") asymmetry=" + fmt(asym) +
                    " (<=1e-3) tail ratio=" + fmt(ratio) + " (in [0.7,1.3])"};
}

Verdict criterion9() {
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> ua1(-5.0, 5.0), ua2(-3.0, -0.05), ulo(-12.0, -3.0), uw(1.0, 6.0);
    std::size_t cases = 0, bad = 0;
    double worst_sse = 0.0, worst_coef = 0.0;
    for (auto basis : {Basis::LeadingOrder, Basis::HigherOrder}) {
        for (int i = 0; i < 1000; ++i) {
            const double a1 = ua1(gen), a2 = ua2(gen), lo = ulo(gen), hi = std::min(lo + uw(gen), -0.1);
            const std::size_t k = 3 + static_cast<std::size_t>(gen() % 60);
            std::vector<TailPoint> pts;
            for (std::size_t j = 0; j < k; ++j) {
                const double l = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(k - 1);
                pts.push_back({l, a1 * l + a2 * quadratic_basis(basis, l)});
            }
            ++cases;
            try {
                const auto fc = fit_tail(pts, basis);
                const double ce = std::max(std::abs(fc.a1 - a1), std::abs(fc.a2 - a2));
                worst_sse = std::max(worst_sse, fc.sse);
                worst_coef = std::max(worst_coef, ce);
                if (!(fc.sse <= 1e-18 && ce <= 1e-9)) ++bad;
            } catch (const Error&) {
                ++bad;
            }
        }
    }
    return {cases >= 1000 && bad == 0, std::to_string(cases) + " cases, " + std::to_string(bad) +
                                           " failures, worst sse=" + fmt(worst_sse) +
                                           " worst coefficient error=" + fmt(worst_coef)};
}

Verdict criterion10() {
    GridStudySpec s;
    s.family = Family::Linear;
    s.a_grid = {0.3, 0.5, 0.7};
    s.boundaries = {BoundaryMode::Kind::TrueBoundary, BoundaryMode::Kind::EstimatedFromData};
    s.methods = {Method::LeadingOrder};
    s.realizations = 100;
    s.jobs = g_jobs;
    const auto r = run_grid_study(s);
    bool ok = true;
    std::string detail;
    for (double a : s.a_grid) {
        double t = kNaN, e = kNaN;
        for (const auto& c : r.summary) {
            if (!near_a(c.a, a)) continue;
            (c.boundary == BoundaryMode::Kind::TrueBoundary ? t : e) = c.estimate.mean;
        }
        ok = ok && e < t;
        detail += " lambda=" + fmt(a, 2) + ": estimated " + fmt(e) + " vs true " + fmt(t);
    }
    return {ok, "mean estimate, estimated < true boundary:" + detail};
}

Verdict criterion11() {
    const auto r = run_grid_study(grid_spec(load("fig17.cfg")));
    std::vector<double> means;
    std::string detail;
    for (double a : {-0.4, 0.0, 0.3}) {
        double v = kNaN;
        for (const auto& c : r.summary)
            if (near_a(c.a, a)) v = c.estimate.mean;
        means.push_back(v);
        detail += " a=" + fmt(a, 2) + ":" + fmt(v);
    }
    const bool ok = means[0] < means[1] && means[1] < means[2];
    return {ok, "mean leading estimate increasing:" + detail};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Verdict criterion12() {
    const fs::path work = TAILWARN_WORKDIR;
    fs::create_directories(work);
    bool ok = true;
    std::string detail;
    for (const char* cfg : {"fig17_n100.cfg", "ulam_linear.cfg"}) {
        std::vector<std::string> csv[2];
        for (int run = 0; run < 2; ++run) {
            const fs::path dir = work / ("run" + std::to_string(run));
            fs::remove_all(dir);
            fs::create_directories(dir);
            const std::string cmd = std::string("\"") + TAILWARN_CLI + "\" " +
                                    std::string(load(cfg).echo.at("command")) + " --config \"" + TAILWARN_REPRODUCE +
                                    "/" + cfg + "\" --output \"" + (dir / "out").string() + "\" > /dev/null";
            if (std::system(cmd.c_str()) != 0) return {false, std::string("CLI failed on ") + cfg};
            for (const auto& e : fs::directory_iterator(dir))
                if (e.path().extension() == ".csv") csv[run].push_back(e.path().filename().string());
            std::sort(csv[run].begin(), csv[run].end());
        }
        bool same = !csv[0].empty() && csv[0] == csv[1];
        for (const auto& f : csv[0])
            same = same && slurp(work / "run0" / f) == slurp(work / "run1" / f);
        ok = ok && same;
        detail += std::string(" ") + cfg + ": " + std::to_string(csv[0].size()) + " CSV files " +
                  (same ? "identical" : "DIFFER");
    }
    return {ok, "byte-identical reruns:" + detail};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    int criterion = 0;
    bool smoke = false;
    app.add_option("--criterion", criterion)->required()->check(CLI::Range(1, 12));
    app.add_flag("--smoke", smoke, "reduced-length variant (criterion 7)");
    app.add_option("--jobs", g_jobs, "worker threads (0 = all cores)");
    CLI11_PARSE(app, argc, argv);

    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        switch (criterion) {
        case 1: v = criterion1(); break;
        case 2: v = criterion2(); break;
        case 3: v = criterion3(); break;
        case 4: v = criterion4(); break;
        case 5: v = criterion5(); break;
        case 6: v = criterion6(); break;
        case 7: v = criterion7(smoke); break;
        case 8: v = criterion8(); break;
        case 9: v = criterion9(); break;
        case 10: v = criterion10(); break;
        case 11: v = criterion11(); break;
        case 12: v = criterion12(); break;
        }
    } catch (const std::exception& e) {
        v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << criterion << (smoke ? " (smoke)" : "") << ": " << (v.pass ? "PASS" : "FAIL") << " "
              << v.detail << " [" << fmt(secs, 3) << " s]\n";
    return v.pass ? 0 : 1;
}
