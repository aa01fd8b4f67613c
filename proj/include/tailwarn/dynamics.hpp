#pragma once

// Deterministic map families, extremal maps, boundary fixed points and the
// fold locator for random difference equations y' = f(y) + xi, |xi| <= eps.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>

#include "tailwarn/error.hpp"

namespace tailwarn {

enum class Family { Linear, TanhShift, ModifiedTanh };
enum class Side { Lower, Upper };

constexpr std::string_view family_name(Family f) noexcept {
    switch (f) {
    case Family::Linear: return "linear";
    case Family::TanhShift: return "tanh-shift";
    case Family::ModifiedTanh: return "modified-tanh";
    }
    return "?";
}

/// One member of a map family together with the noise amplitude.
///
/// - Linear:       f(x) = a x, 0 < a < 1. The noise is scaled to (1 - a) eps so
///                 the invariant interval is [-eps, eps] for every a.
/// - TanhShift:    f(x) = 3 tanh(x / 2) - a.
/// - ModifiedTanh: f(x) = 3 tanh((e^a x + g(a)) / 2) + h(a) + 0.5 with
///                 g(a) = -0.72 (a + 0.8)^3 + 0.36 and
///                 h(a) = -0.2 cbrt(a + 0.0011) + 0.021 (real cube root).
struct MapModel {
    Family family = Family::Linear;
    double a = 0.5;
    double epsilon = 0.1;

    void validate() const {
        if (!(epsilon > 0.0) || !std::isfinite(epsilon))
            detail::fail("dynamics", Errc::InvalidArgument, "epsilon must be positive");
        if (!std::isfinite(a))
            detail::fail("dynamics", Errc::InvalidArgument, "parameter a must be finite");
        if (family == Family::Linear && !(a > 0.0 && a < 1.0))
            detail::fail("dynamics", Errc::InvalidArgument, "linear family requires 0 < a < 1");
    }
};

/// Amplitude of the additive noise actually applied for this model.
inline double noise_amplitude(const MapModel& m) noexcept {
    return m.family == Family::Linear ? (1.0 - m.a) * m.epsilon : m.epsilon;
}

namespace detail {

// Both tanh families are 3 tanh((scale x + shift) / 2) + offset.
struct TanhParams {
    double scale, shift, offset;
};

inline double modified_g(double a) noexcept { return -0.72 * (a + 0.8) * (a + 0.8) * (a + 0.8) + 0.36; }
inline double modified_h(double a) noexcept { return -0.2 * std::cbrt(a + 0.0011) + 0.021; }

inline TanhParams tanh_params(Family f, double a) noexcept {
    if (f == Family::TanhShift) return {1.0, 0.0, -a};
    return {std::exp(a), modified_g(a), modified_h(a) + 0.5};
}

// d(scale, shift, offset)/da
inline TanhParams tanh_params_da(Family f, double a) noexcept {
    if (f == Family::TanhShift) return {0.0, 0.0, -1.0};
    const double c = std::cbrt(a + 0.0011);
    return {std::exp(a), -2.16 * (a + 0.8) * (a + 0.8), -0.2 / (3.0 * c * c)};
}

/// Evaluation kernel with family constants precomputed; cheap to copy.
class MapKernel {
public:
    explicit MapKernel(const MapModel& m) noexcept : linear_(m.family == Family::Linear) {
        if (linear_) {
            slope_ = m.a;
        } else {
            const auto p = tanh_params(m.family, m.a);
            scale_ = p.scale;
            half_scale_ = 0.5 * p.scale;
            half_shift_ = 0.5 * p.shift;
            offset_ = p.offset;
        }
    }

    double operator()(double x) const noexcept {
        if (linear_) return slope_ * x;
        return 3.0 * std::tanh(half_scale_ * x + half_shift_) + offset_;
    }

    double derivative(double x) const noexcept {
        if (linear_) return slope_;
        const double t = std::tanh(half_scale_ * x + half_shift_);
        return 1.5 * scale_ * (1.0 - t * t);
    }

    double second_derivative(double x) const noexcept {
        if (linear_) return 0.0;
        const double t = std::tanh(half_scale_ * x + half_shift_);
        return -1.5 * scale_ * scale_ * t * (1.0 - t * t);
    }

    /// NaN outside the range of the map.
    double inverse(double y) const noexcept {
        if (linear_) return y / slope_;
        const double s = (y - offset_) / 3.0;
        if (!(std::abs(s) < 1.0)) return std::numeric_limits<double>::quiet_NaN();
        return (std::atanh(s) - half_shift_) / half_scale_;
    }

private:
    bool linear_;
    double slope_ = 0.0;
    double scale_ = 1.0, half_scale_ = 0.5, half_shift_ = 0.0, offset_ = 0.0;
};

}  // namespace detail

inline double eval_map(const MapModel& m, double x) { return detail::MapKernel(m)(x); }

inline double derivative(const MapModel& m, double x) { return detail::MapKernel(m).derivative(x); }

inline double second_derivative(const MapModel& m, double x) {
    return detail::MapKernel(m).second_derivative(x);
}

inline double inverse_map(const MapModel& m, double y) { return detail::MapKernel(m).inverse(y); }

/// f(x) - amplitude for Lower, f(x) + amplitude for Upper.
inline double eval_extremal(const MapModel& m, Side side, double x) {
    const double shift = noise_amplitude(m);
    return eval_map(m, x) + (side == Side::Lower ? -shift : shift);
}

struct FixedPointResult {
    double x = 0.0;
    double residual = 0.0;
    std::size_t iterations = 0;
    bool stable = false;
};

struct FixedPointOptions {
    double rel_tol = 1e-12;
    std::size_t max_iterations = 200;
};

/// Fixed point of the extremal map on [lo, hi] by safeguarded Newton: a Newton
/// step that leaves the current sign-change bracket is replaced by bisection.
inline FixedPointResult fixed_point(const MapModel& m, Side side, double lo, double hi,
                                    FixedPointOptions opt = {}) {
    if (!(lo < hi)) std::swap(lo, hi);
    const detail::MapKernel f(m);
    const double shift = side == Side::Lower ? -noise_amplitude(m) : noise_amplitude(m);
    auto g = [&](double x) { return f(x) + shift - x; };
    auto done = [&](double x, double gx) { return std::abs(gx) <= opt.rel_tol * (1.0 + std::abs(x)); };
    auto finish = [&](double x, double gx, std::size_t it) {
        return FixedPointResult{x, std::abs(gx), it, std::abs(f.derivative(x)) < 1.0};
    };

    double glo = g(lo), ghi = g(hi);
    if (done(lo, glo)) return finish(lo, glo, 0);
    if (done(hi, ghi)) return finish(hi, ghi, 0);
    if ((glo < 0.0) == (ghi < 0.0))
        detail::fail("dynamics", Errc::NoSignChange,
                     "extremal map minus identity has the same sign at both bracket ends");

    double x = 0.5 * (lo + hi);
    for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
        const double gx = g(x);
        if (done(x, gx)) return finish(x, gx, it);
        if ((gx < 0.0) == (glo < 0.0)) {
            lo = x;
            glo = gx;
        } else {
            hi = x;
        }
        const double dg = f.derivative(x) - 1.0;
        double next = dg != 0.0 ? x - gx / dg : lo;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) return finish(x, gx, it);  // bracket collapsed to one ulp
        x = next;
    }
    detail::fail("dynamics", Errc::NoConvergence, "fixed point iteration did not converge");
}

/// Minimal invariant interval M = [x_minus, x_plus].
struct InvariantInterval {
    double x_minus = 0.0;
    double x_plus = 0.0;
    double width() const noexcept { return x_plus - x_minus; }
    bool contains(double y, double slack = 0.0) const noexcept {
        return y >= x_minus - slack && y <= x_plus + slack;
    }
};

namespace detail {

// Follows the monotone orbit of the extremal map from `seed` to the fixed point
// it converges to, then polishes it with fixed_point.
inline FixedPointResult attracting_fixed_point(const MapModel& m, Side side, double seed) {
    const double shift = side == Side::Lower ? -noise_amplitude(m) : noise_amplitude(m);
    const MapKernel f(m);
    auto g = [&](double x) { return f(x) + shift - x; };

    double y = seed;
    double step = g(y);
    if (step == 0.0) return fixed_point(m, side, y, y + 1.0);
    const double dir = step > 0.0 ? 1.0 : -1.0;
    constexpr std::size_t kCap = 1'000'000;
    for (std::size_t k = 0; k < kCap; ++k) {
        const double next = y + step;
        if (!std::isfinite(next) || std::abs(next) > 1e12)
            fail("dynamics", Errc::NoInterval, "extremal orbit diverges");
        const double next_step = g(next);
        y = next;
        if (next_step == 0.0 || (next_step > 0.0) != (dir > 0.0))
            break;  // landed on or overshot the fixed point (rounding)
        step = next_step;
        if (std::abs(step) <= 1e-14 * (1.0 + std::abs(y))) break;
    }
    const double gy = g(y);
    if (gy == 0.0) return fixed_point(m, side, y, y + 1e-12 * (1.0 + std::abs(y)));
    // the fixed point lies ahead of y in the direction of g(y)
    const double ahead = gy > 0.0 ? 1.0 : -1.0;
    double width = 2.0 * std::abs(gy) + 1e-13 * (1.0 + std::abs(y));
    for (int i = 0; i < 200; ++i) {
        const double other = y + ahead * width;
        if ((g(other) > 0.0) != (gy > 0.0)) return fixed_point(m, side, y, other);
        width *= 2.0;
    }
    fail("dynamics", Errc::NoInterval, "no fixed point found along the extremal orbit");
}

}  // namespace detail

/// Boundary points of the minimal invariant interval that holds the attractor
/// reached from `seed`: x_minus is the fixed point of f_- reached by iterating
/// f_- from the seed, x_plus likewise for f_+. The pair is rejected if either
/// fixed point is unstable or the extremal maps have further fixed points
/// inside (then the interval is not minimal, e.g. after the fold).
inline InvariantInterval minimal_invariant_interval(const MapModel& m, double seed) {
    m.validate();
    const auto lower = detail::attracting_fixed_point(m, Side::Lower, seed);
    const auto upper = detail::attracting_fixed_point(m, Side::Upper, seed);
    if (!lower.stable || !upper.stable)
        detail::fail("dynamics", Errc::NoInterval, "extremal fixed point is not stable");
    InvariantInterval iv{lower.x, upper.x};
    if (!(iv.x_minus < iv.x_plus))
        detail::fail("dynamics", Errc::NoInterval, "extremal fixed points are not ordered");

    // f_- (x) < x on (x_minus, x_plus] and f_+ (x) > x on [x_minus, x_plus).
    const double amp = noise_amplitude(m);
    const detail::MapKernel f(m);
    constexpr int kMesh = 10000;
    for (int i = 1; i < kMesh; ++i) {
        const double x = iv.x_minus + iv.width() * (static_cast<double>(i) / kMesh);
        const double fx = f(x);
        if (fx - amp - x >= 0.0 || fx + amp - x <= 0.0)
            detail::fail("dynamics", Errc::NoInterval,
                         "extremal maps have further fixed points inside the interval");
    }
    return iv;
}

/// lambda = f'(x_minus) for Lower, f'(x_plus) for Upper.
inline double lambda_true(const MapModel& m, const InvariantInterval& iv, Side side = Side::Lower) {
    return derivative(m, side == Side::Lower ? iv.x_minus : iv.x_plus);
}

struct FoldPoint {
    double x_star = 0.0;
    double a_star = 0.0;
    double value_residual = 0.0;       // |f_pm(x*) - x*|
    double derivative_residual = 0.0;  // |f'(x*) - 1|
};

namespace detail {

// Point where f_a'(x) = 1 on the concave side (Lower) or convex side (Upper).
inline double tangency_x(Family fam, double a, Side side) {
    const auto p = tanh_params(fam, a);
    const double t2 = 1.0 - 2.0 / (3.0 * p.scale);
    if (!(t2 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double t = side == Side::Lower ? std::sqrt(t2) : -std::sqrt(t2);
    return (2.0 * std::atanh(t) - p.shift) / p.scale;
}

inline void fold_residuals(Family fam, double eps, Side side, FoldPoint& fp) {
    const MapModel m{fam, fp.a_star, eps};
    const double s = side == Side::Lower ? -eps : eps;
    fp.value_residual = std::abs(eval_map(m, fp.x_star) + s - fp.x_star);
    fp.derivative_residual = std::abs(derivative(m, fp.x_star) - 1.0);
}

}  // namespace detail

/// Fold (x*, a*) of the chosen extremal map: f_a(x) -/+ eps = x and f_a'(x) = 1.
/// The Lower fold is taken where f is concave, the Upper fold where it is convex.
inline FoldPoint solve_fold(Family fam, double eps, Side side) {
    if (fam == Family::Linear)
        detail::fail("dynamics", Errc::InvalidArgument, "the linear family has no fold");
    if (!(eps > 0.0)) detail::fail("dynamics", Errc::InvalidArgument, "epsilon must be positive");
    const double s = side == Side::Lower ? -eps : eps;
    FoldPoint fp;

    if (fam == Family::TanhShift) {
        // a enters additively: f_0'(x) = 1 fixes x*, then a* = f_0(x*) -/+ eps - x*.
        fp.x_star = detail::tangency_x(fam, 0.0, side);
        fp.a_star = 3.0 * std::tanh(0.5 * fp.x_star) + s - fp.x_star;
        detail::fold_residuals(fam, eps, side, fp);
        return fp;
    }

    // ModifiedTanh: bracket a* along the tangency curve, then damped 2D Newton on (x, a).
    auto gap = [&](double a) {
        const double x = detail::tangency_x(fam, a, side);
        return eval_map({fam, a, eps}, x) + s - x;
    };
    double a_lo = std::numeric_limits<double>::quiet_NaN(), a_hi = a_lo;
    {
        double prev_a = -0.4, prev = gap(prev_a);
        for (double a = -0.4 + 0.005; a <= 3.0; a += 0.005) {
            const double cur = gap(a);
            if (std::isfinite(prev) && std::isfinite(cur) && (prev > 0.0) != (cur > 0.0)) {
                a_lo = prev_a;
                a_hi = a;
                break;
            }
            prev_a = a;
            prev = cur;
        }
    }
    if (!std::isfinite(a_lo)) detail::fail("dynamics", Errc::NoConvergence, "fold not bracketed");

    double a = 0.5 * (a_lo + a_hi);
    double x = detail::tangency_x(fam, a, side);
    auto residual = [&](double xx, double aa, double& r0, double& r1) {
        const MapModel m{fam, aa, eps};
        r0 = eval_map(m, xx) + s - xx;
        r1 = derivative(m, xx) - 1.0;
        return std::hypot(r0, r1);
    };
    double r0 = 0.0, r1 = 0.0;
    double norm = residual(x, a, r0, r1);
    for (int it = 0; it < 100 && norm > 1e-14; ++it) {
        const auto p = detail::tanh_params(fam, a);
        const auto dp = detail::tanh_params_da(fam, a);
        const double u = 0.5 * (p.scale * x + p.shift);
        const double th = std::tanh(u);
        const double sech2 = 1.0 - th * th;
        const double du_da = 0.5 * (dp.scale * x + dp.shift);
        // Jacobian of (f + s - x, f' - 1) with respect to (x, a)
        const double j00 = 1.5 * p.scale * sech2 - 1.0;
        const double j01 = 3.0 * sech2 * du_da + dp.offset;
        const double j10 = -1.5 * p.scale * p.scale * th * sech2;
        const double j11 = 1.5 * dp.scale * sech2 - 3.0 * p.scale * th * sech2 * du_da;
        const double det = j00 * j11 - j01 * j10;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double dx = (r0 * j11 - r1 * j01) / det;
        const double da = (j00 * r1 - j10 * r0) / det;
        double damp = 1.0;
        double nx = x, na = a, n0 = 0.0, n1 = 0.0, nn = norm;
        for (int h = 0; h < 40; ++h, damp *= 0.5) {
            nx = x - damp * dx;
            na = a - damp * da;
            nn = residual(nx, na, n0, n1);
            if (nn < norm) break;
        }
        if (!(nn < norm)) break;
        x = nx;
        a = na;
        r0 = n0;
        r1 = n1;
        norm = nn;
    }
    fp.x_star = x;
    fp.a_star = a;
    detail::fold_residuals(fam, eps, side, fp);
    if (!(fp.value_residual <= 1e-10 && fp.derivative_residual <= 1e-10))
        detail::fail("dynamics", Errc::NoConvergence, "fold Newton iteration did not converge");
    return fp;
}

/// n = min{n >= 0 : f_-^n(x0) < x}, by direct iteration.
inline std::size_t hitting_time(const MapModel& m, double x0, double x, std::size_t cap = 1'000'000) {
    if (!(x < x0)) detail::fail("dynamics", Errc::InvalidArgument, "hitting_time requires x < x0");
    double y = x0;
    std::size_t n = 0;
    while (!(y < x)) {
        const double next = eval_extremal(m, Side::Lower, y);
        if (!(next < y)) detail::fail("dynamics", Errc::Diverged, "lower extremal orbit does not decrease");
        y = next;
        if (++n > cap) detail::fail("dynamics", Errc::Diverged, "hitting time exceeds the iteration cap");
    }
    return n;
}

/// Parameter value a whose lower boundary derivative equals `target`, for
/// families where lambda increases towards the fold. Bisection on
/// [a_min, a*), using `seed` to pick the attractor.
inline double parameter_for_lambda(Family fam, double eps, double target, double seed,
                                   double a_min = -2.0) {
    if (!(target > 0.0 && target < 1.0))
        detail::fail("dynamics", Errc::InvalidArgument, "target lambda must lie in (0, 1)");
    if (fam == Family::Linear) return target;
    const double a_star = solve_fold(fam, eps, Side::Lower).a_star;
    auto lam = [&](double a) {
        const MapModel m{fam, a, eps};
        return lambda_true(m, minimal_invariant_interval(m, seed));
    };
    double lo = a_min, hi = a_star - 1e-9;
    if (!(lam(lo) < target && lam(hi) > target))
        detail::fail("dynamics", Errc::NoConvergence, "target lambda not bracketed");
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        (lam(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace tailwarn
