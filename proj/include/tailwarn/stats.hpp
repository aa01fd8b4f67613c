#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace tailwarn {

/// Linear-interpolation quantile of sorted data (the "type 7" rule).
inline double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Box-plot summary: quartiles by linear interpolation, whiskers at the most
/// extreme data within 1.5 IQR of the box.
struct BoxSummary {
    std::size_t count = 0;
    double mean = std::numeric_limits<double>::quiet_NaN();
    double q1 = mean, median = mean, q3 = mean;
    double whisker_low = mean, whisker_high = mean;
    std::size_t outliers = 0;
};

inline BoxSummary box_summary(std::vector<double> values) {
    BoxSummary s;
    s.count = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    s.q1 = quantile_sorted(values, 0.25);
    s.median = quantile_sorted(values, 0.5);
    s.q3 = quantile_sorted(values, 0.75);
    const double iqr = s.q3 - s.q1;
    const double lo_fence = s.q1 - 1.5 * iqr, hi_fence = s.q3 + 1.5 * iqr;
    s.whisker_low = s.q1;
    s.whisker_high = s.q3;
    bool any = false;
    for (double v : values) {
        if (v < lo_fence || v > hi_fence) {
            ++s.outliers;
            continue;
        }
        if (!any) {
            s.whisker_low = v;
            any = true;
        }
        s.whisker_high = v;
    }
    return s;
}

inline double mean_of(std::span<const double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// sqrt(mean(e^2)).
inline double rmse_of(std::span<const double> errors) {
    if (errors.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double e : errors) s += e * e;
    return std::sqrt(s / static_cast<double>(errors.size()));
}

/// Ordinary least-squares slope of y on x (with intercept). NaN if undefined.
inline double ols_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const double mx = mean_of(x.first(n)), my = mean_of(y.first(n));
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace tailwarn
