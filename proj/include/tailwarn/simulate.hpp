#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tailwarn/dynamics.hpp"
#include "tailwarn/error.hpp"
#include "tailwarn/noise.hpp"
#include "tailwarn/rng.hpp"

namespace tailwarn {

/// Trajectory of y_{t+1} = f(y_t) + xi_t with its provenance.
struct TimeSeries {
    std::vector<double> values;
    MapModel model;
    NoiseModel noise;
    double y0 = 0.0;  // initial condition before burn-in
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
    std::size_t burn_in = 0;
};

namespace detail {
inline void check_finite(double y) {
    if (!std::isfinite(y)) fail("simulate", Errc::NonFinite, "iterate is not finite");
}
}  // namespace detail

/// Fills `out` (size n >= 1) with the orbit starting at y0 after `burn_in`
/// discarded iterates; out[0] is the post-burn-in state.
inline void generate_into(const MapModel& m, const NoiseModel& nm, double y0, std::size_t burn_in,
                          RngStream& rng, std::span<double> out) {
    if (out.empty()) detail::fail("simulate", Errc::InvalidArgument, "series length must be >= 1");
    const detail::MapKernel f(m);
    const NoiseSampler xi(nm);
    double y = y0;
    for (std::size_t t = 0; t < burn_in; ++t) y = f(y) + xi(rng);
    detail::check_finite(y);
    out[0] = y;
    // Overflow is sticky (inf/nan propagate), so one check at the end suffices.
    for (std::size_t t = 1; t < out.size(); ++t) {
        y = f(y) + xi(rng);
        out[t] = y;
    }
    detail::check_finite(y);
}

inline TimeSeries generate(const MapModel& m, const NoiseModel& nm, double y0, std::size_t n,
                           RngStream& rng, std::size_t burn_in = 0) {
    if (n < 1) detail::fail("simulate", Errc::InvalidArgument, "series length must be >= 1");
    TimeSeries ts{std::vector<double>(n), m, nm, y0, rng.master_seed(), rng.stream_index(), burn_in};
    generate_into(m, nm, y0, burn_in, rng, ts.values);
    return ts;
}

/// Deterministic variant driven by an explicit noise sequence:
/// values = [y0, f(y0) + xi_0, ...], length xi.size() + 1.
inline TimeSeries generate(const MapModel& m, double y0, std::span<const double> xi) {
    TimeSeries ts;
    ts.model = m;
    ts.y0 = y0;
    ts.values.reserve(xi.size() + 1);
    const detail::MapKernel f(m);
    double y = y0;
    ts.values.push_back(y);
    for (double e : xi) {
        y = f(y) + e;
        detail::check_finite(y);
        ts.values.push_back(y);
    }
    return ts;
}

/// Unbiased sample variance (divisor n - 1), two-pass.
inline double sample_variance(std::span<const double> v) {
    if (v.size() < 2) detail::fail("simulate", Errc::TooShort, "variance needs at least two values");
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0, comp = 0.0;
    for (double x : v) {
        const double d = x - mean;
        ss += d * d;
        comp += d;
    }
    const double n = static_cast<double>(v.size());
    return (ss - comp * comp / n) / (n - 1.0);
}

/// First index whose value leaves [x_minus - margin, x_plus + margin].
inline std::optional<std::size_t> detect_tipping(std::span<const double> v, const InvariantInterval& iv,
                                                 double margin) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!iv.contains(v[i], margin)) return i;
    return std::nullopt;
}

/// Default escape margin: 5% of the interval width.
inline double default_tipping_margin(const InvariantInterval& iv) { return 0.05 * iv.width(); }

struct SweepRecord {
    double a = 0.0;
    double y0 = 0.0;
    double final_value = 0.0;
    double variance = 0.0;
    std::optional<std::size_t> tip_index;
    std::vector<double> series;  // only when SweepOptions::keep_series

    bool tipped() const noexcept { return tip_index.has_value(); }
};

struct SweepResult {
    std::vector<SweepRecord> records;
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

struct SweepOptions {
    std::size_t n_per_a = 100'000;
    double y0_first = 0.0;
    std::size_t burn_in_first = 0;
    bool keep_series = false;
    std::optional<InvariantInterval> tipping_reference;
    double margin = -1.0;  // < 0 selects default_tipping_margin
};

using SweepObserver = std::function<void(const SweepRecord&, std::span<const double>)>;

/// Parameter continuation: the final iterate at one parameter is the initial
/// condition at the next. Burn-in is applied to the first parameter only.
/// `observer`, when set, sees every record together with its full series.
inline SweepResult continuation_sweep(Family fam, double eps, NoiseKind kind, std::span<const double> a_grid,
                                      const SweepOptions& opt, RngStream& rng, const SweepObserver& observer = {}) {
    if (a_grid.empty()) detail::fail("simulate", Errc::InvalidArgument, "empty parameter grid");
    for (std::size_t i = 1; i < a_grid.size(); ++i)
        if (!(a_grid[i] > a_grid[i - 1]))
            detail::fail("simulate", Errc::InvalidArgument, "parameter grid must be strictly increasing");

    SweepResult out;
    out.master_seed = rng.master_seed();
    out.stream_index = rng.stream_index();
    out.records.reserve(a_grid.size());
    std::vector<double> buf(opt.n_per_a);
    double y0 = opt.y0_first;
    for (std::size_t i = 0; i < a_grid.size(); ++i) {
        const MapModel m{fam, a_grid[i], eps};
        m.validate();
        generate_into(m, make_noise(m, kind), y0, i == 0 ? opt.burn_in_first : 0, rng, buf);
        SweepRecord rec;
        rec.a = a_grid[i];
        rec.y0 = i == 0 ? buf.front() : y0;
        rec.final_value = buf.back();
        rec.variance = buf.size() >= 2 ? sample_variance(buf) : 0.0;
        if (opt.tipping_reference) {
            const double margin = opt.margin >= 0.0 ? opt.margin : default_tipping_margin(*opt.tipping_reference);
            rec.tip_index = detect_tipping(buf, *opt.tipping_reference, margin);
        }
        if (observer) observer(rec, buf);
        if (opt.keep_series) rec.series = buf;
        y0 = rec.final_value;
        out.records.push_back(std::move(rec));
    }
    return out;
}

}  // namespace tailwarn
