#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tailwarn/noise.hpp"

using namespace tailwarn;

namespace {
// Simpson's rule, independent of the closed-form cdf.
double integrate(const NoiseModel& nm, double a, double b, int n = 2000) {
    const double h = (b - a) / n;
    double s = density(nm, a) + density(nm, b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * density(nm, a + i * h);
    return s * h / 3.0;
}
}  // namespace

TEST(Noise, UniformDensityAndCdf) {
    const NoiseModel nm{NoiseKind::Uniform, 0.1};
    EXPECT_DOUBLE_EQ(density(nm, 0.0), 5.0);
    EXPECT_DOUBLE_EQ(density(nm, 0.2), 0.0);
    EXPECT_DOUBLE_EQ(cdf(nm, 0.0), 0.5);
    EXPECT_DOUBLE_EQ(cdf(nm, -0.1), 0.0);
    EXPECT_DOUBLE_EQ(cdf(nm, 0.1), 1.0);
}

TEST(Noise, TruncatedNormalReferenceValues) {
    const NoiseModel nm{NoiseKind::TruncatedNormal, 0.1};
    EXPECT_NEAR(density(nm, 0.0), 8.359191, 1e-6);
    EXPECT_NEAR(cdf(nm, 0.05), 0.8576164, 1e-7);
    EXPECT_NEAR(cdf(nm, 0.0), 0.5, 1e-15);
}

TEST(Noise, CdfIsIntegralOfDensity) {
    for (auto kind : {NoiseKind::Uniform, NoiseKind::TruncatedNormal}) {
        const NoiseModel nm{kind, 0.3, 0.0, 0.1};
        for (double z = -0.3; z <= 0.3; z += 0.05) EXPECT_NEAR(cdf(nm, z), integrate(nm, -0.3, z), 1e-9);
    }
}

TEST(Noise, SamplerStaysBoundedWithRightMoments) {
    RngStream rng(3, 1);
    for (auto kind : {NoiseKind::Uniform, NoiseKind::TruncatedNormal}) {
        const NoiseModel nm{kind, 0.1};
        const NoiseSampler s(nm);
        const int n = 400000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = s(rng);
            ASSERT_GE(x, -0.1);
            ASSERT_LE(x, 0.1);
            sum += x;
            sum2 += x * x;
        }
        const double var = sum2 / n - (sum / n) * (sum / n);
        const double expected = kind == NoiseKind::Uniform ? 0.01 / 3.0 : 0.0019343533;
        EXPECT_NEAR(sum / n, 0.0, 5e-4);
        EXPECT_NEAR(var, expected, 0.02 * expected);
    }
}

TEST(Noise, TruncatedNormalUsesTwoDrawsPerAttempt) {
    // With a huge epsilon nothing is rejected, so each sample costs exactly two draws.
    const NoiseModel nm{NoiseKind::TruncatedNormal, 1e6, 0.0, 1.0};
    RngStream a(11, 0), b(11, 0);
    for (int i = 0; i < 10; ++i) sample(nm, a);
    for (int i = 0; i < 20; ++i) b();
    EXPECT_EQ(a(), b());
}

TEST(Noise, MakeNoiseUsesModelAmplitude) {
    EXPECT_NEAR(make_noise({Family::Linear, 0.6, 0.1}, NoiseKind::Uniform).epsilon, 0.04, 1e-15);
    EXPECT_DOUBLE_EQ(make_noise({Family::TanhShift, 0.6, 0.1}, NoiseKind::TruncatedNormal).epsilon, 0.1);
}
