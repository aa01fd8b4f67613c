#pragma once

// Normalised histograms with boundary estimates, tail selection, and Ulam's
// method for the stationary density of the random map.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "tailwarn/dynamics.hpp"
#include "tailwarn/error.hpp"
#include "tailwarn/noise.hpp"

namespace tailwarn {

/// Which point of a bin stands in for the bin: x_i = z_{i-1} + c dz with
/// c = 1/2, 0 or 1.
enum class Representative { Midpoint, LeftEdge, RightEdge };

constexpr double representative_fraction(Representative r) noexcept {
    switch (r) {
    case Representative::Midpoint: return 0.5;
    case Representative::LeftEdge: return 0.0;
    case Representative::RightEdge: return 1.0;
    }
    return 0.5;
}

struct BoundaryMode {
    enum class Kind { TrueBoundary, EstimatedFromData };
    Kind kind = Kind::EstimatedFromData;
    double x_minus = 0.0;  // used for TrueBoundary only

    static BoundaryMode true_boundary(double x) noexcept { return {Kind::TrueBoundary, x}; }
    static BoundaryMode estimated() noexcept { return {Kind::EstimatedFromData, 0.0}; }
    bool is_true() const noexcept { return kind == Kind::TrueBoundary; }
};

constexpr std::string_view boundary_name(BoundaryMode::Kind k) noexcept {
    return k == BoundaryMode::Kind::TrueBoundary ? "true" : "estimated";
}

/// Equal-width normalised histogram. Heights are in density units so that
/// sum(heights) * dz == 1. Bins are half-open [z_{i-1}, z_i) except the last,
/// which is closed.
struct TailHistogram {
    double z0 = 0.0;
    double z_end = 0.0;
    double dz = 0.0;
    std::size_t samples = 0;
    std::vector<std::size_t> counts;  // empty when built from a density
    std::vector<double> heights;
    Representative representative = Representative::Midpoint;
    BoundaryMode boundary;
    double x_hat_minus = 0.0;
    double x_hat_plus = 0.0;
    double boundary_gap = 0.0;  // z0 - x_hat_minus

    std::size_t bins() const noexcept { return heights.size(); }
    double edge(std::size_t i) const noexcept { return i == bins() ? z_end : z0 + static_cast<double>(i) * dz; }

    /// Representative point x_{i+1} of the (0-based) bin i.
    double point(std::size_t i) const noexcept {
        return z0 + (static_cast<double>(i) + representative_fraction(representative)) * dz;
    }

    /// Distance of bin i's representative point from the boundary estimate,
    /// computed relative to z0 so it depends only on differences of the data.
    double boundary_offset(std::size_t i) const noexcept {
        return boundary_gap + (static_cast<double>(i) + representative_fraction(representative)) * dz;
    }

    /// Same, for an arbitrary boundary value.
    double offset_from(std::size_t i, double boundary_value) const noexcept {
        return (z0 - boundary_value) + (static_cast<double>(i) + representative_fraction(representative)) * dz;
    }

    /// Probability mass of bin i.
    double mass(std::size_t i) const noexcept {
        if (!counts.empty()) return static_cast<double>(counts[i]) / static_cast<double>(samples);
        return heights[i] * dz;
    }
};

namespace detail {
inline void set_boundary(TailHistogram& h, const BoundaryMode& mode) {
    const double c = representative_fraction(h.representative);
    h.boundary = mode;
    h.x_hat_plus = h.point(h.bins() - 1) + h.dz;
    if (mode.is_true()) {
        h.x_hat_minus = mode.x_minus;
        h.boundary_gap = h.z0 - mode.x_minus;
    } else {
        // x_hat = x_1 - dz
        h.x_hat_minus = h.point(0) - h.dz;
        h.boundary_gap = (1.0 - c) * h.dz;
    }
}
}  // namespace detail

inline TailHistogram build_histogram(std::span<const double> series, std::size_t b, const BoundaryMode& mode,
                                     Representative rep = Representative::Midpoint) {
    if (b < 2) detail::fail("density", Errc::InvalidArgument, "histogram needs at least two bins");
    if (series.size() < b) detail::fail("density", Errc::InvalidArgument, "series shorter than the bin count");
    const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) detail::fail("density", Errc::DegenerateRange, "series has zero range");

    TailHistogram h;
    h.z0 = lo;
    h.z_end = hi;
    h.dz = (hi - lo) / static_cast<double>(b);
    h.samples = series.size();
    h.representative = rep;
    h.counts.assign(b, 0);
    const double inv = 1.0 / h.dz;
    for (double y : series) {
        auto k = static_cast<std::size_t>((y - lo) * inv);
        if (k >= b) k = b - 1;
        ++h.counts[k];
    }
    h.heights.resize(b);
    const double norm = 1.0 / (h.dz * static_cast<double>(series.size()));
    for (std::size_t i = 0; i < b; ++i) h.heights[i] = static_cast<double>(h.counts[i]) * norm;
    detail::set_boundary(h, mode);
    return h;
}

/// Histogram view of a density given on equal-width bins starting at z0
/// (e.g. an Ulam approximation).
inline TailHistogram histogram_from_density(double z0, double dz, std::vector<double> heights,
                                            const BoundaryMode& mode,
                                            Representative rep = Representative::Midpoint) {
    if (heights.size() < 2) detail::fail("density", Errc::InvalidArgument, "need at least two bins");
    TailHistogram h;
    h.z0 = z0;
    h.dz = dz;
    h.z_end = z0 + dz * static_cast<double>(heights.size());
    h.heights = std::move(heights);
    h.representative = rep;
    detail::set_boundary(h, mode);
    return h;
}

/// h_min = absolute if absolute >= 0, else fraction * max_i h_i.
struct HMinRule {
    double fraction = 0.01;
    double absolute = -1.0;

    double threshold(std::span<const double> heights) const {
        if (absolute >= 0.0) return absolute;
        return fraction * *std::max_element(heights.begin(), heights.end());
    }
};

struct TailSelection {
    std::size_t b_l = 0;              // bins 0 .. b_l-1 form the tail
    std::vector<std::size_t> kept;    // 0-based bin indices with h > h_min
    double q = 0.0;
    double h_min = 0.0;
};

/// b_l = max{ j : mass of bins 1..j < q }; tail points kept where h > h_min.
inline TailSelection select_tail(const TailHistogram& h, double q, const HMinRule& rule = {}) {
    if (!(q > 0.0 && q < 1.0)) detail::fail("density", Errc::InvalidArgument, "q must lie in (0, 1)");
    TailSelection sel;
    sel.q = q;
    sel.h_min = rule.threshold(h.heights);
    if (!h.counts.empty()) {
        // integer cumulative counts avoid drift in the running mass
        const double limit = q * static_cast<double>(h.samples);
        std::size_t cum = 0;
        for (std::size_t i = 0; i < h.bins(); ++i) {
            cum += h.counts[i];
            if (!(static_cast<double>(cum) < limit)) break;
            sel.b_l = i + 1;
        }
    } else {
        double cum = 0.0;
        for (std::size_t i = 0; i < h.bins(); ++i) {
            cum += h.mass(i);
            if (!(cum < q)) break;
            sel.b_l = i + 1;
        }
    }
    for (std::size_t i = 0; i < sel.b_l; ++i)
        if (h.heights[i] > sel.h_min) sel.kept.push_back(i);
    if (sel.kept.empty()) detail::fail("density", Errc::EmptyTail, "no tail bins above h_min");
    return sel;
}

/// Stationary density on [x_minus, x_plus] approximated by Ulam's method.
struct UlamDensity {
    double x_minus = 0.0;
    double x_plus = 0.0;
    std::vector<double> heights;
    double residual = 0.0;  // || pi P - pi ||_1 at exit
    std::size_t iterations = 0;

    std::size_t bins() const noexcept { return heights.size(); }
    double delta() const noexcept { return (x_plus - x_minus) / static_cast<double>(bins()); }
    double midpoint(std::size_t i) const noexcept { return x_minus + (static_cast<double>(i) + 0.5) * delta(); }
};

/// One row of the Ulam transition matrix: entries for target bins
/// first .. first + values.size() - 1.
struct UlamRow {
    std::size_t first = 0;
    std::vector<double> values;
};

/// Row i by midpoint collocation: P_ij = F(z_j - f(c_i)) - F(z_{j-1} - f(c_i)),
/// clipped to the support and renormalised.
inline UlamRow ulam_row(const MapModel& m, const NoiseModel& nm, const InvariantInterval& iv, std::size_t bins,
                        std::size_t i) {
    const double delta = iv.width() / static_cast<double>(bins);
    const double y = eval_map(m, iv.x_minus + (static_cast<double>(i) + 0.5) * delta);
    auto bin_of = [&](double x) {
        const double k = std::floor((x - iv.x_minus) / delta);
        return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(bins - 1)));
    };
    const std::size_t jlo = bin_of(y - nm.epsilon), jhi = bin_of(y + nm.epsilon);
    UlamRow row{jlo, std::vector<double>(jhi - jlo + 1)};
    double prev = cdf(nm, iv.x_minus + static_cast<double>(jlo) * delta - y);
    double total = 0.0;
    for (std::size_t j = jlo; j <= jhi; ++j) {
        const double upper = j + 1 == bins ? iv.x_plus : iv.x_minus + static_cast<double>(j + 1) * delta;
        const double cur = cdf(nm, upper - y);
        row.values[j - jlo] = cur - prev;
        total += cur - prev;
        prev = cur;
    }
    if (total > 0.0) {
        for (double& v : row.values) v /= total;
    } else {
        row.values.assign(1, 1.0);  // image outside the support by rounding only
        row.first = bin_of(y);
    }
    return row;
}

struct UlamOptions {
    double tol = 1e-10;
    std::size_t max_iterations = 100'000;
};

namespace detail {

// Push-forward pi -> pi P for uniform noise without storing P: each row is the
// uniform law on the clipped image interval, so interior entries are constant.
class UniformUlamOperator {
public:
    UniformUlamOperator(const MapModel& m, double eps, const InvariantInterval& iv, std::size_t bins)
        : x0_(iv.x_minus), x1_(iv.x_plus), delta_((iv.x_plus - iv.x_minus) / static_cast<double>(bins)),
          bins_(bins), lo_(bins), hi_(bins) {
        for (std::size_t i = 0; i < bins; ++i) {
            const double y = eval_map(m, x0_ + (static_cast<double>(i) + 0.5) * delta_);
            lo_[i] = std::clamp(y - eps, x0_, x1_);
            hi_[i] = std::clamp(y + eps, x0_, x1_);
        }
    }

    void apply(std::span<const double> pi, std::span<double> out, std::vector<double>& diff) const {
        std::fill(out.begin(), out.end(), 0.0);
        diff.assign(bins_ + 1, 0.0);
        for (std::size_t i = 0; i < bins_; ++i) {
            const double w = pi[i];
            if (w == 0.0) continue;
            const double lo = lo_[i], hi = hi_[i], len = hi - lo;
            const std::size_t jl = bin_of(lo), jh = bin_of(hi);
            if (jl == jh || !(len > 0.0)) {
                out[jl] += w;
                continue;
            }
            out[jl] += w * (edge(jl + 1) - lo) / len;
            out[jh] += w * (hi - edge(jh)) / len;
            const double full = w * delta_ / len;
            diff[jl + 1] += full;
            diff[jh] -= full;
        }
        double run = 0.0;
        for (std::size_t j = 0; j < bins_; ++j) {
            run += diff[j];
            out[j] += run;
        }
    }

private:
    std::size_t bin_of(double x) const noexcept {
        const double k = std::floor((x - x0_) / delta_);
        return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(bins_ - 1)));
    }
    double edge(std::size_t j) const noexcept { return j == bins_ ? x1_ : x0_ + static_cast<double>(j) * delta_; }

    double x0_, x1_, delta_;
    std::size_t bins_;
    std::vector<double> lo_, hi_;
};

template <class Apply>
UlamDensity power_iterate(const InvariantInterval& iv, std::size_t bins, const UlamOptions& opt, Apply&& apply) {
    std::vector<double> pi(bins, 1.0 / static_cast<double>(bins)), next(bins);
    UlamDensity u{iv.x_minus, iv.x_plus, {}, 0.0, 0};
    for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
        apply(pi, next);
        double sum = 0.0;
        for (double v : next) sum += v;
        double res = 0.0;
        for (std::size_t j = 0; j < bins; ++j) {
            next[j] /= sum;
            res += std::abs(next[j] - pi[j]);
        }
        pi.swap(next);
        u.iterations = it;
        u.residual = res;
        if (res <= opt.tol) {
            const double delta = iv.width() / static_cast<double>(bins);
            u.heights.resize(bins);
            for (std::size_t j = 0; j < bins; ++j) u.heights[j] = pi[j] / delta;
            return u;
        }
    }
    fail("density", Errc::NoConvergence, "Ulam power iteration did not converge");
}

}  // namespace detail

/// Ulam approximation of the stationary density on the invariant interval.
/// `nm` is the noise actually applied (see make_noise). Uniform noise uses a
/// matrix-free push-forward; other laws store the banded matrix.
inline UlamDensity ulam_density(const MapModel& m, const NoiseModel& nm, const InvariantInterval& iv,
                                std::size_t bins, UlamOptions opt = {}) {
    if (bins < 2) detail::fail("density", Errc::InvalidArgument, "Ulam needs at least two bins");
    if (!(iv.x_minus < iv.x_plus)) detail::fail("density", Errc::InvalidArgument, "invalid interval");

    if (nm.kind == NoiseKind::Uniform) {
        const detail::UniformUlamOperator op(m, nm.epsilon, iv, bins);
        std::vector<double> diff;
        return detail::power_iterate(iv, bins, opt, [&](std::span<const double> pi, std::span<double> out) {
            op.apply(pi, out, diff);
        });
    }

    std::vector<UlamRow> rows;
    rows.reserve(bins);
    for (std::size_t i = 0; i < bins; ++i) rows.push_back(ulam_row(m, nm, iv, bins, i));
    return detail::power_iterate(iv, bins, opt, [&](std::span<const double> pi, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < bins; ++i) {
            const double w = pi[i];
            const auto& r = rows[i];
            for (std::size_t k = 0; k < r.values.size(); ++k) out[r.first + k] += w * r.values[k];
        }
    });
}

/// Bin range [first, last) used by tail_asymptotics_check.
struct BinWindow {
    std::size_t first = 0;
    std::size_t last = 0;
};

/// Ratio of the least-squares slope of log(phi) against log^2(x - x_minus)
/// (with intercept) to the leading-order coefficient 1 / (2 log lambda).
/// Points with phi <= 0 are skipped.
inline double tail_asymptotics_check(std::span<const double> offsets, std::span<const double> phi, double lambda) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < offsets.size() && i < phi.size(); ++i) {
        if (!(phi[i] > 0.0) || !(offsets[i] > 0.0)) continue;
        const double l = std::log(offsets[i]);
        const double x = l * l, y = std::log(phi[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    if (k < 2) detail::fail("density", Errc::EmptyWindow, "need at least two positive points in the window");
    const double n = static_cast<double>(k);
    const double var = sxx - sx * sx / n;
    if (!(var > 0.0)) detail::fail("density", Errc::EmptyWindow, "window points are not distinct");
    const double slope = (sxy - sx * sy / n) / var;
    return slope * 2.0 * std::log(lambda);
}

inline double tail_asymptotics_check(const UlamDensity& u, double lambda, BinWindow w) {
    if (w.last > u.bins() || w.first >= w.last || w.last - w.first < 2)
        detail::fail("density", Errc::EmptyWindow, "window must hold at least two bins");
    std::vector<double> offsets, phi;
    for (std::size_t i = w.first; i < w.last; ++i) {
        offsets.push_back((static_cast<double>(i) + 0.5) * u.delta());
        phi.push_back(u.heights[i]);
    }
    return tail_asymptotics_check(offsets, phi, lambda);
}

}  // namespace tailwarn
