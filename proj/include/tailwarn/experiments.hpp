#pragma once

// Seeded Monte Carlo studies built on the simulate/density/estimator layers.
// Every (parameter, realization) pair draws from its own RNG stream, so the
// outputs are independent of the number of worker threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "tailwarn/density.hpp"
#include "tailwarn/dynamics.hpp"
#include "tailwarn/error.hpp"
#include "tailwarn/estimator.hpp"
#include "tailwarn/noise.hpp"
#include "tailwarn/parallel.hpp"
#include "tailwarn/rng.hpp"
#include "tailwarn/simulate.hpp"
#include "tailwarn/stats.hpp"

namespace tailwarn {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// lo, lo + step, ..., up to hi (inclusive within half a step). Each point is
/// computed as lo + i * step, so long grids do not accumulate drift.
inline std::vector<double> step_grid(double lo, double step, double hi) {
    if (!(step > 0.0) || !(hi >= lo)) detail::fail("experiments", Errc::InvalidArgument, "bad grid bounds");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) g[i] = lo + static_cast<double>(i) * step;
    return g;
}

/// `count` evenly spaced points on [lo, hi].
inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {lo};
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    g.back() = hi;
    return g;
}

/// `count` log-spaced points on [lo, hi], lo > 0.
inline std::vector<double> logspace(double lo, double hi, std::size_t count) {
    auto g = linspace(std::log(lo), std::log(hi), count);
    for (double& v : g) v = std::exp(v);
    if (!g.empty()) {
        g.front() = lo;
        g.back() = hi;
    }
    return g;
}

/// Parameter-point truth: the minimal invariant interval containing the
/// attractor reached from `seed` and lambda at its lower end, if they exist.
struct Truth {
    std::optional<InvariantInterval> interval;
    double lambda = kNaN;
    std::string status = "ok";
};

inline Truth truth_at(Family fam, double a, double eps, double seed) {
    Truth t;
    const MapModel m{fam, a, eps};
    try {
        t.interval = minimal_invariant_interval(m, seed);
        t.lambda = lambda_true(m, *t.interval);
    } catch (const Error& e) {
        t.interval.reset();
        t.status = e.qualified();
    }
    return t;
}

/// Default attractor seed: the origin for the linear family, x = 3 for the
/// tanh families (upper attractor).
constexpr double default_seed_point(Family fam) noexcept { return fam == Family::Linear ? 0.0 : 3.0; }

/// One estimate in the long-format output.
struct EstimateRow {
    double a = 0.0;
    double lambda_true = kNaN;
    Method method = Method::LeadingOrder;
    BoundaryMode::Kind boundary = BoundaryMode::Kind::EstimatedFromData;
    std::size_t n = 0;
    std::size_t b = 0;
    double q = 0.0;
    std::size_t realization = 0;
    double lambda_hat = kNaN;  // signed value for the interval method
    double abs_error = kNaN;
    std::string status = "ok";

    bool ok() const noexcept { return status == "ok"; }
};

/// |lambda_true - lambda_hat|, using |lambda_hat| for the interval method.
inline double estimate_error(double truth, double hat, Method method) noexcept {
    if (!std::isfinite(truth) || !std::isfinite(hat)) return kNaN;
    return std::abs(truth - (method == Method::Interval ? std::abs(hat) : hat));
}

/// Runs one method on one series. Failures are caught and reported through
/// `status`; the row is otherwise filled in.
inline EstimateRow estimate_row(std::span<const double> series, double a, const Truth& truth, Method method,
                                BoundaryMode::Kind boundary, std::size_t b, double q, const HMinRule& h_min,
                                Representative rep, std::size_t realization) {
    EstimateRow row;
    row.a = a;
    row.lambda_true = truth.lambda;
    row.method = method;
    row.boundary = boundary;
    row.n = series.size();
    row.b = b;
    row.q = q;
    row.realization = realization;
    try {
        BoundaryMode mode = BoundaryMode::estimated();
        if (boundary == BoundaryMode::Kind::TrueBoundary) {
            if (!truth.interval) detail::fail("experiments", Errc::NoInterval, "no true boundary at this parameter");
            mode = BoundaryMode::true_boundary(truth.interval->x_minus);
        }
        const auto h = build_histogram(series, b, mode, rep);
        if (method == Method::Interval) {
            const auto iv = default_intervals(series, h.x_hat_minus, h.dz);
            row.lambda_hat = interval_method(series, iv).lambda_hat;
        } else {
            const Basis basis = method == Method::HigherOrder ? Basis::HigherOrder : Basis::LeadingOrder;
            row.lambda_hat = estimate_from_selection(h, select_tail(h, q, h_min), basis).lambda_hat;
        }
        row.abs_error = estimate_error(row.lambda_true, row.lambda_hat, method);
    } catch (const Error& e) {
        row.status = e.qualified();
    }
    return row;
}

enum class Protocol { Independent, Continuation };

/// Grid-study configuration.
struct GridStudySpec {
    Family family = Family::Linear;
    NoiseKind noise = NoiseKind::Uniform;
    double epsilon = 0.1;
    std::vector<double> a_grid;
    std::size_t n = 100'000;
    std::size_t b = 200;
    double q = 0.3;
    HMinRule h_min;
    Representative representative = Representative::Midpoint;
    std::vector<BoundaryMode::Kind> boundaries{BoundaryMode::Kind::EstimatedFromData};
    std::vector<Method> methods{Method::LeadingOrder};
    std::size_t realizations = 100;
    std::uint64_t master_seed = 1;
    std::optional<double> y0;  // default: midpoint of the invariant interval, else the seed point
    std::size_t burn_in = 1000;
    std::optional<double> seed_point;
    Protocol protocol = Protocol::Independent;
    unsigned jobs = 1;

    double attractor_seed() const noexcept { return seed_point.value_or(default_seed_point(family)); }

    void validate() const {
        if (a_grid.empty()) detail::fail("experiments", Errc::InvalidArgument, "empty parameter grid");
        if (methods.empty() || boundaries.empty())
            detail::fail("experiments", Errc::InvalidArgument, "no method or boundary mode selected");
        if (realizations == 0) detail::fail("experiments", Errc::InvalidArgument, "realizations must be >= 1");
        if (protocol == Protocol::Continuation)
            for (std::size_t i = 1; i < a_grid.size(); ++i)
                if (!(a_grid[i] > a_grid[i - 1]))
                    detail::fail("experiments", Errc::InvalidArgument, "continuation needs an increasing grid");
    }
};

/// Box-plot summary of one (a, method, boundary) cell.
struct CellSummary {
    double a = 0.0;
    double lambda_true = kNaN;
    Method method = Method::LeadingOrder;
    BoundaryMode::Kind boundary = BoundaryMode::Kind::EstimatedFromData;
    std::size_t realizations = 0;
    std::size_t failures = 0;
    BoxSummary estimate;
    double mean_abs_error = kNaN;
};

struct GridStudyResult {
    std::vector<EstimateRow> rows;
    std::vector<CellSummary> summary;
    std::vector<Truth> truths;  // one per grid point
};

/// Groups rows by (a, method, boundary) in first-appearance order.
inline std::vector<CellSummary> summarize(std::span<const EstimateRow> rows) {
    using Key = std::tuple<double, int, int>;
    std::map<Key, std::size_t> index;
    std::vector<CellSummary> cells;
    std::vector<std::vector<double>> hats, errs;
    for (const auto& r : rows) {
        const Key k{r.a, static_cast<int>(r.method), static_cast<int>(r.boundary)};
        auto [it, fresh] = index.try_emplace(k, cells.size());
        if (fresh) {
            CellSummary c;
            c.a = r.a;
            c.lambda_true = r.lambda_true;
            c.method = r.method;
            c.boundary = r.boundary;
            cells.push_back(c);
            hats.emplace_back();
            errs.emplace_back();
        }
        auto& c = cells[it->second];
        ++c.realizations;
        if (!r.ok()) {
            ++c.failures;
            continue;
        }
        hats[it->second].push_back(r.lambda_hat);
        if (std::isfinite(r.abs_error)) errs[it->second].push_back(r.abs_error);
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        cells[i].estimate = box_summary(hats[i]);
        cells[i].mean_abs_error = mean_of(errs[i]);
    }
    return cells;
}

inline GridStudyResult run_grid_study(const GridStudySpec& spec) {
    spec.validate();
    const std::size_t A = spec.a_grid.size(), R = spec.realizations;
    GridStudyResult out;
    out.truths.reserve(A);
    for (double a : spec.a_grid) {
        MapModel{spec.family, a, spec.epsilon}.validate();
        out.truths.push_back(truth_at(spec.family, a, spec.epsilon, spec.attractor_seed()));
    }
    auto start_value = [&](std::size_t ai) {
        if (spec.y0) return *spec.y0;
        const auto& t = out.truths[ai];
        return t.interval ? 0.5 * (t.interval->x_minus + t.interval->x_plus) : spec.attractor_seed();
    };
    auto estimates_for = [&](std::span<const double> series, std::size_t ai, std::size_t r,
                             std::vector<EstimateRow>& dst) {
        for (auto bk : spec.boundaries)
            for (auto method : spec.methods)
                dst.push_back(estimate_row(series, spec.a_grid[ai], out.truths[ai], method, bk, spec.b, spec.q,
                                           spec.h_min, spec.representative, r));
    };
    auto failed_rows = [&](std::size_t ai, std::size_t r, const std::string& status,
                           std::vector<EstimateRow>& dst) {
        for (auto bk : spec.boundaries)
            for (auto method : spec.methods) {
                EstimateRow row;
                row.a = spec.a_grid[ai];
                row.lambda_true = out.truths[ai].lambda;
                row.method = method;
                row.boundary = bk;
                row.n = spec.n;
                row.b = spec.b;
                row.q = spec.q;
                row.realization = r;
                row.status = status;
                dst.push_back(row);
            }
    };

    // slot[ai * R + r] holds the rows of one (parameter, realization) pair
    std::vector<std::vector<EstimateRow>> slot(A * R);
    if (spec.protocol == Protocol::Independent) {
        parallel_for(A * R, spec.jobs, [&](std::size_t task) {
            const std::size_t ai = task / R, r = task % R;
            RngStream rng(spec.master_seed, task);
            const MapModel m{spec.family, spec.a_grid[ai], spec.epsilon};
            std::vector<double> series(spec.n);
            try {
                generate_into(m, make_noise(m, spec.noise), start_value(ai), spec.burn_in, rng, series);
            } catch (const Error& e) {
                failed_rows(ai, r, e.qualified(), slot[task]);
                return;
            }
            estimates_for(series, ai, r, slot[task]);
        });
    } else {
        parallel_for(R, spec.jobs, [&](std::size_t r) {
            RngStream rng(spec.master_seed, r);
            std::vector<double> series(spec.n);
            double y0 = start_value(0);
            std::string dead;  // once a trajectory diverges the rest of the chain fails
            for (std::size_t ai = 0; ai < A; ++ai) {
                auto& dst = slot[ai * R + r];
                if (!dead.empty()) {
                    failed_rows(ai, r, dead, dst);
                    continue;
                }
                const MapModel m{spec.family, spec.a_grid[ai], spec.epsilon};
                try {
                    generate_into(m, make_noise(m, spec.noise), y0, ai == 0 ? spec.burn_in : 0, rng, series);
                } catch (const Error& e) {
                    dead = e.qualified();
                    failed_rows(ai, r, dead, dst);
                    continue;
                }
                estimates_for(series, ai, r, dst);
                y0 = series.back();
            }
        });
    }
    for (auto& s : slot)
        for (auto& row : s) out.rows.push_back(std::move(row));
    out.summary = summarize(out.rows);
    return out;
}

/// RMSE over rows matching `method`, skipping failures and rows without truth.
struct RmseValue {
    double rmse = kNaN;
    std::size_t used = 0;
    std::size_t skipped = 0;
};

template <class Pred>
RmseValue rmse_where(std::span<const EstimateRow> rows, Pred&& pred) {
    RmseValue v;
    std::vector<double> errs;
    for (const auto& r : rows) {
        if (!pred(r)) continue;
        if (r.ok() && std::isfinite(r.abs_error))
            errs.push_back(r.abs_error);
        else
            ++v.skipped;
    }
    v.used = errs.size();
    v.rmse = rmse_of(errs);
    return v;
}

// ---------------------------------------------------------------------------
// Variance counterexample

struct VarianceDemoSpec {
    Family family = Family::ModifiedTanh;
    NoiseKind noise = NoiseKind::Uniform;
    double epsilon = 0.8;
    std::vector<double> a_grid = step_grid(0.0, 0.01, 0.8);
    std::size_t n = 1'000'000;
    std::size_t realizations = 10;
    std::uint64_t master_seed = 1;
    double y0 = 3.0;
    std::size_t burn_in = 100;
    std::size_t b = 200;
    double q = 0.1;
    HMinRule h_min;
    Representative representative = Representative::Midpoint;
    BoundaryMode::Kind boundary = BoundaryMode::Kind::EstimatedFromData;
    std::vector<Method> methods{Method::LeadingOrder, Method::HigherOrder};
    double margin_fraction = 0.05;
    bool ulam = false;
    std::size_t ulam_bins = 8192;
    double ulam_q = 1e-4;
    HMinRule ulam_h_min{0.01, 0.0};
    unsigned jobs = 1;
};

struct VarianceRow {
    double a = 0.0;
    std::size_t realization = 0;
    double variance = kNaN;
    bool tipped = false;  // the trajectory has left the reference interval at or before this a
    std::vector<EstimateRow> estimates;
};

struct VarianceSummaryRow {
    double a = 0.0;
    double lambda_true = kNaN;
    double mean_variance = kNaN;
    std::vector<double> mean_lambda_hat;  // per method, over successful fits
    std::size_t tipped = 0;
};

struct VarianceDemoResult {
    double a_star = kNaN;
    InvariantInterval reference;
    double margin = 0.0;
    std::vector<Truth> truths;
    std::vector<VarianceRow> rows;             // a-major, then realization
    std::vector<VarianceSummaryRow> summary;   // one per a
    std::vector<double> tipping_parameter;     // per realization, NaN if never tipped
    std::vector<EstimateRow> ulam_rows;        // realization index 0, n = 0
};

/// Mean of the realizations' values over successful fits of method index k.
inline double mean_estimate(std::span<const VarianceRow> rows, double a, std::size_t k) {
    std::vector<double> v;
    for (const auto& r : rows)
        if (r.a == a && k < r.estimates.size() && r.estimates[k].ok()) v.push_back(r.estimates[k].lambda_hat);
    return mean_of(v);
}

inline VarianceDemoResult run_variance_demo(const VarianceDemoSpec& spec) {
    if (spec.a_grid.empty() || spec.realizations == 0)
        detail::fail("experiments", Errc::InvalidArgument, "empty variance-demo grid");
    VarianceDemoResult out;
    out.a_star = solve_fold(spec.family, spec.epsilon, Side::Lower).a_star;
    bool have_ref = false;
    for (double a : spec.a_grid) {
        out.truths.push_back(truth_at(spec.family, a, spec.epsilon, spec.y0));
        const auto& t = out.truths.back();
        if (a < out.a_star && t.interval) {
            // tipping reference: hull of the pre-fold minimal invariant intervals
            if (!have_ref) {
                out.reference = *t.interval;
                have_ref = true;
            }
            out.reference.x_minus = std::min(out.reference.x_minus, t.interval->x_minus);
            out.reference.x_plus = std::max(out.reference.x_plus, t.interval->x_plus);
        }
    }
    if (!have_ref) detail::fail("experiments", Errc::NoInterval, "no pre-fold parameter in the grid");
    out.margin = spec.margin_fraction * out.reference.width();

    const std::size_t A = spec.a_grid.size(), R = spec.realizations;
    std::vector<VarianceRow> slot(A * R);
    parallel_for(R, spec.jobs, [&](std::size_t r) {
        RngStream rng(spec.master_seed, r);
        std::vector<double> series(spec.n);
        double y0 = spec.y0;
        bool tipped = false;
        std::string dead;
        for (std::size_t ai = 0; ai < A; ++ai) {
            auto& row = slot[ai * R + r];
            row.a = spec.a_grid[ai];
            row.realization = r;
            const MapModel m{spec.family, row.a, spec.epsilon};
            if (dead.empty()) {
                try {
                    generate_into(m, make_noise(m, spec.noise), y0, ai == 0 ? spec.burn_in : 0, rng, series);
                } catch (const Error& e) {
                    dead = e.qualified();
                }
            }
            if (!dead.empty()) {
                row.tipped = tipped;
                for (auto method : spec.methods) {
                    EstimateRow e;
                    e.a = row.a;
                    e.method = method;
                    e.status = dead;
                    row.estimates.push_back(e);
                }
                continue;
            }
            row.variance = sample_variance(series);
            tipped = tipped || detect_tipping(series, out.reference, out.margin).has_value();
            row.tipped = tipped;
            for (auto method : spec.methods)
                row.estimates.push_back(estimate_row(series, row.a, out.truths[ai], method, spec.boundary, spec.b,
                                                     spec.q, spec.h_min, spec.representative, r));
            y0 = series.back();
        }
    });
    out.rows = std::move(slot);

    out.tipping_parameter.assign(R, kNaN);
    for (const auto& row : out.rows)
        if (row.tipped && std::isnan(out.tipping_parameter[row.realization]))
            out.tipping_parameter[row.realization] = row.a;

    for (std::size_t ai = 0; ai < A; ++ai) {
        VarianceSummaryRow s;
        s.a = spec.a_grid[ai];
        s.lambda_true = out.truths[ai].lambda;
        std::vector<double> vars;
        for (std::size_t r = 0; r < R; ++r) {
            const auto& row = out.rows[ai * R + r];
            if (std::isfinite(row.variance)) vars.push_back(row.variance);
            if (row.tipped) ++s.tipped;
        }
        s.mean_variance = mean_of(vars);
        for (std::size_t k = 0; k < spec.methods.size(); ++k)
            s.mean_lambda_hat.push_back(
                mean_estimate(std::span<const VarianceRow>(out.rows).subspan(ai * R, R), s.a, k));
        out.summary.push_back(std::move(s));
    }

    if (spec.ulam) {
        std::vector<std::vector<EstimateRow>> ulam_slot(A);
        parallel_for(A, spec.jobs, [&](std::size_t ai) {
            const double a = spec.a_grid[ai];
            const auto& t = out.truths[ai];
            for (auto method : spec.methods) {
                EstimateRow e;
                e.a = a;
                e.lambda_true = t.lambda;
                e.method = method;
                e.boundary = BoundaryMode::Kind::TrueBoundary;
                e.b = spec.ulam_bins;
                e.q = spec.ulam_q;
                e.status = a < out.a_star ? t.status : "experiments.NoInterval";
                ulam_slot[ai].push_back(e);
            }
            if (!t.interval || a >= out.a_star) return;
            try {
                const MapModel m{spec.family, a, spec.epsilon};
                const auto u = ulam_density(m, make_noise(m, spec.noise), *t.interval, spec.ulam_bins);
                const auto h = histogram_from_density(u.x_minus, u.delta(), u.heights,
                                                      BoundaryMode::true_boundary(u.x_minus));
                const auto sel = select_tail(h, spec.ulam_q, spec.ulam_h_min);
                for (auto& e : ulam_slot[ai]) {
                    if (e.method == Method::Interval) {
                        e.status = "experiments.InvalidArgument";
                        continue;
                    }
                    try {
                        const Basis basis = e.method == Method::HigherOrder ? Basis::HigherOrder : Basis::LeadingOrder;
                        e.lambda_hat = estimate_from_selection(h, sel, basis).lambda_hat;
                        e.abs_error = estimate_error(e.lambda_true, e.lambda_hat, e.method);
                        e.status = "ok";
                    } catch (const Error& err) {
                        e.status = err.qualified();
                    }
                }
            } catch (const Error& err) {
                for (auto& e : ulam_slot[ai]) e.status = err.qualified();
            }
        });
        for (auto& s : ulam_slot)
            for (auto& e : s) out.ulam_rows.push_back(std::move(e));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hyperparameter RMSE sweep

struct RmseSweepSpec {
    Family family = Family::TanhShift;
    NoiseKind noise = NoiseKind::Uniform;
    double epsilon = 0.1;
    std::vector<double> a_grid = step_grid(-0.5, 0.01, 0.31);
    std::size_t n = 100'000;
    std::vector<std::size_t> b_values{200};
    std::vector<double> q_values{0.3};
    std::vector<Method> methods{Method::LeadingOrder, Method::HigherOrder};
    BoundaryMode::Kind boundary = BoundaryMode::Kind::EstimatedFromData;
    HMinRule h_min;
    Representative representative = Representative::Midpoint;
    std::size_t realizations = 10;
    std::uint64_t master_seed = 1;
    std::size_t burn_in = 1000;
    std::optional<double> seed_point;
    unsigned jobs = 1;
};

struct RmseRow {
    std::size_t b = 0;
    double q = 0.0;
    Method method = Method::LeadingOrder;
    BoundaryMode::Kind boundary = BoundaryMode::Kind::EstimatedFromData;
    double rmse = kNaN;
    std::size_t used = 0;
    std::size_t skipped = 0;
};

struct RmseSweepResult {
    std::vector<RmseRow> table;
    std::vector<EstimateRow> rows;
};

inline RmseSweepResult run_rmse_sweep(const RmseSweepSpec& spec) {
    if (spec.a_grid.empty() || spec.b_values.empty() || spec.q_values.empty() || spec.methods.empty() ||
        spec.realizations == 0)
        detail::fail("experiments", Errc::InvalidArgument, "empty RMSE sweep axis");
    const double seed = spec.seed_point.value_or(default_seed_point(spec.family));
    std::vector<Truth> truths;
    for (double a : spec.a_grid) truths.push_back(truth_at(spec.family, a, spec.epsilon, seed));

    const std::size_t A = spec.a_grid.size(), R = spec.realizations;
    std::vector<std::vector<EstimateRow>> slot(A * R);
    parallel_for(A * R, spec.jobs, [&](std::size_t task) {
        const std::size_t ai = task / R, r = task % R;
        const auto& t = truths[ai];
        const double a = spec.a_grid[ai];
        const MapModel m{spec.family, a, spec.epsilon};
        RngStream rng(spec.master_seed, task);
        std::vector<double> series(spec.n);
        const double y0 = t.interval ? 0.5 * (t.interval->x_minus + t.interval->x_plus) : seed;
        std::string status = "ok";
        try {
            generate_into(m, make_noise(m, spec.noise), y0, spec.burn_in, rng, series);
        } catch (const Error& e) {
            status = e.qualified();
        }
        for (std::size_t b : spec.b_values) {
            // one histogram per b, shared by every q and method
            std::optional<TailHistogram> h;
            std::string hstatus = status;
            if (hstatus == "ok") {
                try {
                    if (spec.boundary == BoundaryMode::Kind::TrueBoundary && !t.interval)
                        detail::fail("experiments", Errc::NoInterval, "no true boundary at this parameter");
                    const auto mode = spec.boundary == BoundaryMode::Kind::TrueBoundary
                                          ? BoundaryMode::true_boundary(t.interval->x_minus)
                                          : BoundaryMode::estimated();
                    h = build_histogram(series, b, mode, spec.representative);
                } catch (const Error& e) {
                    hstatus = e.qualified();
                }
            }
            for (double q : spec.q_values)
                for (auto method : spec.methods) {
                    EstimateRow row;
                    row.a = a;
                    row.lambda_true = t.lambda;
                    row.method = method;
                    row.boundary = spec.boundary;
                    row.n = spec.n;
                    row.b = b;
                    row.q = q;
                    row.realization = r;
                    row.status = hstatus;
                    if (h) {
                        try {
                            if (method == Method::Interval) {
                                row.lambda_hat =
                                    interval_method(series, default_intervals(series, h->x_hat_minus, h->dz))
                                        .lambda_hat;
                            } else {
                                const Basis basis =
                                    method == Method::HigherOrder ? Basis::HigherOrder : Basis::LeadingOrder;
                                row.lambda_hat =
                                    estimate_from_selection(*h, select_tail(*h, q, spec.h_min), basis).lambda_hat;
                            }
                            row.abs_error = estimate_error(row.lambda_true, row.lambda_hat, method);
                        } catch (const Error& e) {
                            row.status = e.qualified();
                        }
                    }
                    slot[task].push_back(row);
                }
        }
    });
    RmseSweepResult out;
    for (auto& s : slot)
        for (auto& row : s) out.rows.push_back(std::move(row));
    for (std::size_t b : spec.b_values)
        for (double q : spec.q_values)
            for (auto method : spec.methods) {
                const auto v = rmse_where(out.rows, [&](const EstimateRow& r) {
                    return r.b == b && r.q == q && r.method == method;
                });
                out.table.push_back({b, q, method, spec.boundary, v.rmse, v.used, v.skipped});
            }
    return out;
}

// ---------------------------------------------------------------------------
// Boundary-error study

struct BoundaryStudySpec {
    Family family = Family::Linear;
    NoiseKind noise = NoiseKind::Uniform;
    double epsilon = 0.1;
    std::vector<double> lambdas{0.24, 0.42, 0.65, 0.8};
    std::size_t n = 100'000;
    std::size_t b = 200;
    double q = 0.3;
    HMinRule h_min;
    Representative representative = Representative::Midpoint;
    std::vector<Method> methods{Method::LeadingOrder, Method::HigherOrder};
    std::size_t realizations = 100;
    std::size_t offsets = 20;
    double offset_span = 100.0;  // offsets cover [u / span, u], u = x_hat_minus - x_minus
    std::uint64_t master_seed = 1;
    std::size_t burn_in = 1000;
    std::optional<double> seed_point;
    unsigned jobs = 1;
};

struct BoundaryRow {
    double lambda_true = 0.0;
    double a = 0.0;
    Method method = Method::LeadingOrder;
    std::size_t realization = 0;
    double offset = 0.0;  // x'_hat - x_minus
    double gap = kNaN;    // lambda_hat(x_minus) - lambda_hat(x'_hat)
    std::string status = "ok";
};

struct BoundarySlope {
    double lambda_true = 0.0;
    double a = 0.0;
    Method method = Method::LeadingOrder;
    double mean_slope = kNaN;    // average of per-realization slopes
    double pooled_slope = kNaN;  // one regression over all points
    std::size_t realizations_used = 0;
};

struct BoundaryStudyResult {
    std::vector<BoundaryRow> rows;
    std::vector<BoundarySlope> slopes;
    std::vector<std::vector<double>> realization_slopes;  // parallel to slopes
};

/// Least-squares slope of log(gap) against log(offset) over rows with gap > 0.
inline double log_log_slope(std::span<const BoundaryRow> rows) {
    std::vector<double> x, y;
    for (const auto& r : rows)
        if (r.status == "ok" && r.gap > 0.0 && r.offset > 0.0) {
            x.push_back(std::log(r.offset));
            y.push_back(std::log(r.gap));
        }
    return ols_slope(x, y);
}

inline BoundaryStudyResult run_boundary_study(const BoundaryStudySpec& spec) {
    if (spec.lambdas.empty() || spec.methods.empty() || spec.realizations == 0 || spec.offsets < 2)
        detail::fail("experiments", Errc::InvalidArgument, "empty boundary-study axis");
    for (auto method : spec.methods)
        if (method == Method::Interval)
            detail::fail("experiments", Errc::InvalidArgument, "boundary study needs a fitting method");
    const double seed = spec.seed_point.value_or(default_seed_point(spec.family));
    const std::size_t L = spec.lambdas.size(), R = spec.realizations, M = spec.methods.size();
    std::vector<double> params(L);
    std::vector<InvariantInterval> ivs(L);
    for (std::size_t li = 0; li < L; ++li) {
        params[li] = parameter_for_lambda(spec.family, spec.epsilon, spec.lambdas[li], seed);
        ivs[li] = minimal_invariant_interval({spec.family, params[li], spec.epsilon}, seed);
    }

    // slot[(li * M + mi) * R + r]
    std::vector<std::vector<BoundaryRow>> slot(L * M * R);
    parallel_for(L * R, spec.jobs, [&](std::size_t task) {
        const std::size_t li = task / R, r = task % R;
        const MapModel m{spec.family, params[li], spec.epsilon};
        const double x_minus = ivs[li].x_minus;
        RngStream rng(spec.master_seed, task);
        std::vector<double> series(spec.n);
        std::string status = "ok";
        std::optional<TailHistogram> h;
        std::optional<TailSelection> sel;
        std::vector<double> offsets;
        try {
            generate_into(m, make_noise(m, spec.noise), 0.5 * (ivs[li].x_minus + ivs[li].x_plus), spec.burn_in,
                          rng, series);
            h = build_histogram(series, spec.b, BoundaryMode::true_boundary(x_minus), spec.representative);
            sel = select_tail(*h, spec.q, spec.h_min);
            const double u = (h->point(0) - h->dz) - x_minus;
            if (!(u > 0.0)) detail::fail("experiments", Errc::InvalidArgument, "estimated boundary below x_minus");
            offsets = logspace(u / spec.offset_span, u, spec.offsets);
        } catch (const Error& e) {
            status = e.qualified();
        }
        for (std::size_t mi = 0; mi < M; ++mi) {
            auto& dst = slot[(li * M + mi) * R + r];
            const Basis basis = spec.methods[mi] == Method::HigherOrder ? Basis::HigherOrder : Basis::LeadingOrder;
            std::string mstatus = status;
            double at_truth = kNaN;
            if (mstatus == "ok") {
                try {
                    at_truth = estimate_from_selection(*h, *sel, basis, x_minus).lambda_hat;
                } catch (const Error& e) {
                    mstatus = e.qualified();
                }
            }
            if (mstatus != "ok") {
                BoundaryRow row{spec.lambdas[li], params[li], spec.methods[mi], r, kNaN, kNaN, mstatus};
                dst.push_back(row);
                continue;
            }
            for (double d : offsets) {
                BoundaryRow row{spec.lambdas[li], params[li], spec.methods[mi], r, d, kNaN, "ok"};
                try {
                    row.gap = at_truth - estimate_from_selection(*h, *sel, basis, x_minus + d).lambda_hat;
                } catch (const Error& e) {
                    row.status = e.qualified();
                }
                dst.push_back(row);
            }
        }
    });

    BoundaryStudyResult out;
    for (std::size_t li = 0; li < L; ++li)
        for (std::size_t mi = 0; mi < M; ++mi) {
            BoundarySlope s{spec.lambdas[li], params[li], spec.methods[mi]};
            std::vector<double> per;
            std::vector<BoundaryRow> pooled;
            for (std::size_t r = 0; r < R; ++r) {
                const auto& rows = slot[(li * M + mi) * R + r];
                const double slope = log_log_slope(rows);
                if (std::isfinite(slope)) per.push_back(slope);
                pooled.insert(pooled.end(), rows.begin(), rows.end());
            }
            s.mean_slope = mean_of(per);
            s.pooled_slope = log_log_slope(pooled);
            s.realizations_used = per.size();
            out.slopes.push_back(s);
            out.realization_slopes.push_back(std::move(per));
            for (auto& row : pooled) out.rows.push_back(std::move(row));
        }
    return out;
}

}  // namespace tailwarn
