#pragma once

// Estimators of lambda = f_-'(x_-) from the left tail of the stationary density.
//
// The tail points are (l_i, log h_i) with l_i = log(x_i - x_hat_minus). Two
// bases are fitted by least squares without intercept:
//   LeadingOrder: log h ~ a1 l + a2 l^2
//   HigherOrder:  log h ~ a1 l + a2 (l^2 - 2 l log(-l))
// and lambda_hat = exp(1 / (2 a2)) with a2 < 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tailwarn/density.hpp"
#include "tailwarn/error.hpp"

namespace tailwarn {

enum class Basis { LeadingOrder, HigherOrder };
enum class Method { LeadingOrder, HigherOrder, Interval };

constexpr std::string_view method_name(Method m) noexcept {
    switch (m) {
    case Method::LeadingOrder: return "leading";
    case Method::HigherOrder: return "higher";
    case Method::Interval: return "interval";
    }
    return "?";
}

constexpr Method method_of(Basis b) noexcept {
    return b == Basis::LeadingOrder ? Method::LeadingOrder : Method::HigherOrder;
}

struct TailPoint {
    double l = 0.0;
    double log_h = 0.0;
};

struct FitCoefficients {
    double a1 = 0.0;
    double a2 = 0.0;
    Basis basis = Basis::LeadingOrder;
    double sse = 0.0;
    std::size_t points_used = 0;
};

/// Second basis function for a2.
inline double quadratic_basis(Basis b, double l) noexcept {
    return b == Basis::LeadingOrder ? l * l : l * l - 2.0 * l * std::log(-l);
}

/// Least-squares (a1, a2) over a2 < 0 via the 2x2 normal equations. The
/// constraint is open, so an unconstrained minimiser with a2 >= 0 means no
/// admissible optimum exists and is reported as DegenerateFit.
inline FitCoefficients fit_tail(std::span<const TailPoint> pts, Basis basis) {
    if (pts.size() < 2) detail::fail("estimator", Errc::TooFewPoints, "fit needs at least two points");
    if (basis == Basis::HigherOrder)
        for (const auto& p : pts)
            if (!(p.l < 0.0)) detail::fail("estimator", Errc::PositiveLog, "higher-order basis needs l < 0");

    double suu = 0.0, suv = 0.0, svv = 0.0, suy = 0.0, svy = 0.0;
    for (const auto& p : pts) {
        const double u = p.l, v = quadratic_basis(basis, p.l);
        suu += u * u;
        suv += u * v;
        svv += v * v;
        suy += u * p.log_h;
        svy += v * p.log_h;
    }
    const double det = suu * svv - suv * suv;
    if (!(det > 1e-13 * suu * svv))
        detail::fail("estimator", Errc::CollinearBasis, "normal equations are singular");

    FitCoefficients fc;
    fc.basis = basis;
    fc.a1 = (svv * suy - suv * svy) / det;
    fc.a2 = (suu * svy - suv * suy) / det;
    fc.points_used = pts.size();
    if (!(fc.a2 < 0.0)) detail::fail("estimator", Errc::DegenerateFit, "fitted a2 is not negative");
    for (const auto& p : pts) {
        const double r = fc.a1 * p.l + fc.a2 * quadratic_basis(basis, p.l) - p.log_h;
        fc.sse += r * r;
    }
    return fc;
}

inline double lambda_from_a2(double a2) {
    if (!(a2 < 0.0)) detail::fail("estimator", Errc::NonNegativeA2, "a2 must be negative");
    return std::exp(1.0 / (2.0 * a2));
}

struct EstimatorConfig {
    std::size_t b = 200;
    double q = 0.3;
    HMinRule h_min;
    BoundaryMode boundary = BoundaryMode::estimated();
    Basis basis = Basis::LeadingOrder;
    Representative representative = Representative::Midpoint;
};

/// Result of one estimation with its intermediate artefacts.
struct LambdaEstimate {
    double lambda_hat = 0.0;
    Method method = Method::LeadingOrder;
    std::optional<FitCoefficients> coefficients;
    BoundaryMode boundary;
    double x_hat_minus = 0.0;
    std::size_t n = 0;
    std::size_t b = 0;
    double q = 0.0;
    double h_min = 0.0;
    TailSelection selection;
    std::vector<TailPoint> points;
    std::size_t excluded_nonnegative_log = 0;  // HigherOrder points with x - x_hat >= 1
    double interval_raw = 0.0;                  // Interval method: signed value
};

/// Tail points of a histogram, measured from `boundary` or from the
/// histogram's own boundary estimate. For HigherOrder, points with l >= 0 are
/// dropped and counted in `excluded`.
inline std::vector<TailPoint> tail_points(const TailHistogram& h, const TailSelection& sel, Basis basis,
                                          std::optional<double> boundary, std::size_t& excluded) {
    std::vector<TailPoint> pts;
    pts.reserve(sel.kept.size());
    excluded = 0;
    for (std::size_t i : sel.kept) {
        const double d = boundary ? h.offset_from(i, *boundary) : h.boundary_offset(i);
        if (!(d > 0.0))
            detail::fail("estimator", Errc::InvalidArgument, "boundary lies to the right of a tail point");
        const double l = std::log(d);
        if (basis == Basis::HigherOrder && !(l < 0.0)) {
            ++excluded;
            continue;
        }
        pts.push_back({l, std::log(h.heights[i])});
    }
    if (basis == Basis::HigherOrder && pts.empty())
        detail::fail("estimator", Errc::PositiveLog, "no tail point with x - x_hat < 1");
    return pts;
}

/// Fit on an already selected tail. `boundary_override`, when set, replaces the
/// histogram's own boundary estimate.
inline LambdaEstimate estimate_from_selection(const TailHistogram& h, const TailSelection& sel, Basis basis,
                                              std::optional<double> boundary_override = std::nullopt) {
    LambdaEstimate est;
    est.method = method_of(basis);
    est.boundary = boundary_override ? BoundaryMode::true_boundary(*boundary_override) : h.boundary;
    est.x_hat_minus = boundary_override ? *boundary_override : h.x_hat_minus;
    est.n = h.samples;
    est.b = h.bins();
    est.q = sel.q;
    est.h_min = sel.h_min;
    est.selection = sel;
    est.points = tail_points(h, sel, basis, boundary_override, est.excluded_nonnegative_log);
    est.coefficients = fit_tail(est.points, basis);
    est.lambda_hat = lambda_from_a2(est.coefficients->a2);
    return est;
}

inline LambdaEstimate estimate_from_histogram(const TailHistogram& h, const EstimatorConfig& cfg) {
    return estimate_from_selection(h, select_tail(h, cfg.q, cfg.h_min), cfg.basis);
}

/// Histogram -> tail selection -> least-squares fit -> lambda_hat.
inline LambdaEstimate estimate_lambda(std::span<const double> series, const EstimatorConfig& cfg) {
    if (series.empty()) detail::fail("estimator", Errc::InvalidArgument, "empty series");
    const auto h = build_histogram(series, cfg.b, cfg.boundary, cfg.representative);
    return estimate_from_histogram(h, cfg);
}

/// Two disjoint intervals I1 = [a1, b1], I2 = [a2, b2] with b1 < a2.
struct IntervalPair {
    double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
};

/// Baseline slope estimate from one-step images of visits to I1 and I2:
///   (mean y_{t+1} | y_t in I1  -  mean y_{t+1} | y_t in I2) / (b2 - a1).
/// The signed value is kept in interval_raw; lambda_hat holds the same value.
inline LambdaEstimate interval_method(std::span<const double> series, const IntervalPair& iv) {
    if (!(iv.a1 <= iv.b1 && iv.b1 < iv.a2 && iv.a2 <= iv.b2))
        detail::fail("estimator", Errc::InvalidArgument, "intervals must satisfy a1 <= b1 < a2 <= b2");
    double s1 = 0.0, s2 = 0.0;
    std::size_t k1 = 0, k2 = 0;
    for (std::size_t t = 0; t + 1 < series.size(); ++t) {
        const double y = series[t];
        if (y >= iv.a1 && y <= iv.b1) {
            s1 += series[t + 1];
            ++k1;
        } else if (y >= iv.a2 && y <= iv.b2) {
            s2 += series[t + 1];
            ++k2;
        }
    }
    if (k1 == 0 || k2 == 0) detail::fail("estimator", Errc::EmptyInterval, "an interval is never visited");
    LambdaEstimate est;
    est.method = Method::Interval;
    est.n = series.size();
    est.interval_raw = (s1 / static_cast<double>(k1) - s2 / static_cast<double>(k2)) / (iv.b2 - iv.a1);
    est.lambda_hat = est.interval_raw;
    return est;
}

/// Default placement: I1 and I2 are the first and third quarters of
/// [x_hat, x_hat + 4 dz k], with the smallest k for which each interval holds
/// at least `min_visits` visits that have a successor.
inline IntervalPair default_intervals(std::span<const double> series, double x_hat, double dz,
                                      std::size_t min_visits = 100) {
    if (!(dz > 0.0)) detail::fail("estimator", Errc::InvalidArgument, "bin width must be positive");
    std::vector<double> sorted(series.begin(), series.end() - (series.empty() ? 0 : 1));
    std::sort(sorted.begin(), sorted.end());
    auto count_in = [&](double lo, double hi) {
        return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), hi) -
                                        std::lower_bound(sorted.begin(), sorted.end(), lo));
    };
    for (std::size_t k = 1; k <= 1'000'000; k *= 2) {
        // doubling search for a feasible k, then refine downwards
        const double w = dz * static_cast<double>(k);
        if (count_in(x_hat, x_hat + w) >= min_visits && count_in(x_hat + 2.0 * w, x_hat + 3.0 * w) >= min_visits) {
            std::size_t lo = k / 2, hi = k;
            while (hi - lo > 1) {
                const std::size_t mid = (lo + hi) / 2;
                const double wm = dz * static_cast<double>(mid);
                if (count_in(x_hat, x_hat + wm) >= min_visits &&
                    count_in(x_hat + 2.0 * wm, x_hat + 3.0 * wm) >= min_visits)
                    hi = mid;
                else
                    lo = mid;
            }
            const double wk = dz * static_cast<double>(hi);
            return {x_hat, x_hat + wk, x_hat + 2.0 * wk, x_hat + 3.0 * wk};
        }
        if (sorted.empty() || x_hat + 3.0 * w > sorted.back()) break;
    }
    detail::fail("estimator", Errc::EmptyInterval, "not enough visits near the boundary");
}

/// Mirror image -y of a series, so the right tail becomes a left tail.
inline std::vector<double> reflect_series(std::span<const double> series) {
    std::vector<double> out(series.size());
    std::transform(series.begin(), series.end(), out.begin(), [](double y) { return -y; });
    return out;
}

}  // namespace tailwarn
