#pragma once

#include <cmath>
#include <numbers>
#include <string_view>

#include "tailwarn/dynamics.hpp"
#include "tailwarn/error.hpp"
#include "tailwarn/rng.hpp"

namespace tailwarn {

enum class NoiseKind { Uniform, TruncatedNormal };

constexpr std::string_view noise_name(NoiseKind k) noexcept {
    return k == NoiseKind::Uniform ? "uniform" : "truncated-normal";
}

/// Bounded noise law on [-epsilon, epsilon]. mu and sigma are only used by the
/// truncated normal; sigma <= 0 means the default epsilon / 2.
struct NoiseModel {
    NoiseKind kind = NoiseKind::Uniform;
    double epsilon = 0.1;
    double mu = 0.0;
    double sigma = 0.0;

    double scale() const noexcept { return sigma > 0.0 ? sigma : 0.5 * epsilon; }

    void validate() const {
        if (!(epsilon > 0.0) || !std::isfinite(epsilon))
            detail::fail("noise", Errc::InvalidArgument, "epsilon must be positive");
        if (kind == NoiseKind::TruncatedNormal && !std::isfinite(mu))
            detail::fail("noise", Errc::InvalidArgument, "mu must be finite");
    }
};

/// Noise law matching the amplitude the map model expects (scaled for Linear).
inline NoiseModel make_noise(const MapModel& m, NoiseKind kind) {
    return NoiseModel{kind, noise_amplitude(m), 0.0, 0.0};
}

namespace detail {
inline double std_normal_pdf(double z) noexcept {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}
inline double std_normal_cdf(double z) noexcept { return 0.5 * (1.0 + std::erf(z / std::numbers::sqrt2)); }
}  // namespace detail

inline double density(const NoiseModel& nm, double z) {
    if (z < -nm.epsilon || z > nm.epsilon) return 0.0;
    if (nm.kind == NoiseKind::Uniform) return 0.5 / nm.epsilon;
    const double s = nm.scale();
    const double mass = detail::std_normal_cdf((nm.epsilon - nm.mu) / s) -
                        detail::std_normal_cdf((-nm.epsilon - nm.mu) / s);
    return detail::std_normal_pdf((z - nm.mu) / s) / (s * mass);
}

inline double cdf(const NoiseModel& nm, double z) {
    if (z <= -nm.epsilon) return 0.0;
    if (z >= nm.epsilon) return 1.0;
    if (nm.kind == NoiseKind::Uniform) return (z + nm.epsilon) / (2.0 * nm.epsilon);
    const double s = nm.scale();
    const double lo = detail::std_normal_cdf((-nm.epsilon - nm.mu) / s);
    const double hi = detail::std_normal_cdf((nm.epsilon - nm.mu) / s);
    return (detail::std_normal_cdf((z - nm.mu) / s) - lo) / (hi - lo);
}

/// Draw protocol: Uniform consumes one raw draw; TruncatedNormal draws a
/// Box-Muller normal from exactly two raw draws per attempt and rejects
/// attempts outside [-epsilon, epsilon].
class NoiseSampler {
public:
    explicit NoiseSampler(const NoiseModel& nm) noexcept
        : uniform_(nm.kind == NoiseKind::Uniform), eps_(nm.epsilon), mu_(nm.mu), sigma_(nm.scale()) {}

    double operator()(RngStream& rng) const noexcept {
        if (uniform_) return eps_ * (2.0 * rng.uniform() - 1.0);
        for (;;) {
            const double u1 = 1.0 - rng.uniform();  // (0, 1]
            const double u2 = rng.uniform();
            const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
            const double x = mu_ + sigma_ * z;
            if (x >= -eps_ && x <= eps_) return x;
        }
    }

private:
    bool uniform_;
    double eps_, mu_, sigma_;
};

inline double sample(const NoiseModel& nm, RngStream& rng) { return NoiseSampler(nm)(rng); }

}  // namespace tailwarn
