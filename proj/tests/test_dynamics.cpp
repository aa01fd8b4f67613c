#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "tailwarn/dynamics.hpp"

using namespace tailwarn;

namespace {

// Plain bisection, used as an oracle independent of the Newton solver.
double bisect(const std::function<double(double)>& g, double lo, double hi) {
    double glo = g(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi), gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

const MapModel kModels[] = {
    {Family::Linear, 0.3, 0.1},       {Family::Linear, 0.9, 0.1},         {Family::TanhShift, -0.5, 0.1},
    {Family::TanhShift, 0.0, 0.1},    {Family::TanhShift, 0.3, 0.1},      {Family::ModifiedTanh, 0.0, 0.8},
    {Family::ModifiedTanh, 0.17, 0.8}, {Family::ModifiedTanh, 0.6, 0.8},
};

}  // namespace

TEST(Map, TanhShiftValue) {
    const MapModel m{Family::TanhShift, 0.4, 0.1};
    EXPECT_NEAR(eval_map(m, 2.0), 3.0 * std::tanh(1.0) - 0.4, 1e-15);
    EXPECT_NEAR(eval_map(m, 2.0), 1.8847825, 1e-7);
}

TEST(Map, ModifiedTanhValue) {
    const double a = 0.3, x = 1.2;
    const MapModel m{Family::ModifiedTanh, a, 0.8};
    const double g = -0.72 * std::pow(a + 0.8, 3) + 0.36;
    const double h = -0.2 * std::cbrt(a + 0.0011) + 0.021;
    EXPECT_NEAR(eval_map(m, x), 3.0 * std::tanh((std::exp(a) * x + g) / 2.0) + h + 0.5, 1e-14);
}

TEST(Map, ModifiedTanhRealCubeRootBelowShift) {
    const MapModel m{Family::ModifiedTanh, -0.5, 0.8};
    const double a = -0.5;
    const double g = -0.72 * std::pow(a + 0.8, 3) + 0.36;
    const double h = 0.2 * std::cbrt(-(a + 0.0011)) + 0.021;
    EXPECT_NEAR(eval_map(m, 0.7), 3.0 * std::tanh((std::exp(a) * 0.7 + g) / 2.0) + h + 0.5, 1e-14);
}

TEST(Map, LinearNoiseScaling) {
    const MapModel m{Family::Linear, 0.7, 0.1};
    EXPECT_NEAR(noise_amplitude(m), 0.03, 1e-15);
    EXPECT_NEAR(eval_extremal(m, Side::Lower, -0.1), -0.1, 1e-15);
    EXPECT_NEAR(eval_extremal(m, Side::Upper, 0.1), 0.1, 1e-15);
    EXPECT_DOUBLE_EQ(noise_amplitude({Family::TanhShift, 0.7, 0.1}), 0.1);
}

TEST(Map, DerivativesMatchFiniteDifferences) {
    for (const auto& m : kModels)
        for (double x = -3.0; x <= 3.0; x += 0.25) {
            const double h = 1e-5;
            const double fd1 = (eval_map(m, x + h) - eval_map(m, x - h)) / (2 * h);
            const double fd2 = (derivative(m, x + h) - derivative(m, x - h)) / (2 * h);
            EXPECT_NEAR(derivative(m, x), fd1, 1e-7) << family_name(m.family) << " x=" << x;
            EXPECT_NEAR(second_derivative(m, x), fd2, 1e-6) << family_name(m.family) << " x=" << x;
        }
}

TEST(Map, IncreasingAndInvertible) {
    for (const auto& m : kModels)
        for (double x = -3.0; x <= 3.0; x += 0.1) {
            EXPECT_GT(derivative(m, x), 0.0);
            EXPECT_LT(eval_map(m, x), eval_map(m, x + 0.1));
            EXPECT_NEAR(inverse_map(m, eval_map(m, x)), x, 1e-9) << family_name(m.family) << " x=" << x;
        }
}

TEST(Map, ValidateRejectsBadParameters) {
    EXPECT_THROW((MapModel{Family::Linear, 1.0, 0.1}.validate()), Error);
    EXPECT_THROW((MapModel{Family::Linear, 0.5, 0.0}.validate()), Error);
    EXPECT_THROW((MapModel{Family::TanhShift, NAN, 0.1}.validate()), Error);
    EXPECT_NO_THROW((MapModel{Family::TanhShift, -2.0, 0.1}.validate()));
}

TEST(FixedPoint, TanhLowerBranchAtZero) {
    const MapModel m{Family::TanhShift, 0.0, 0.1};
    const auto fp = fixed_point(m, Side::Lower, 2.0, 4.0);
    const double oracle = bisect([](double x) { return 3.0 * std::tanh(x / 2.0) - 0.1 - x; }, 2.0, 4.0);
    EXPECT_NEAR(fp.x, oracle, 1e-11);
    EXPECT_NEAR(fp.x, 2.401775618891, 1e-11);
    EXPECT_TRUE(fp.stable);
    EXPECT_LE(fp.residual, 1e-11);
}

TEST(FixedPoint, ResidualsSmallAcrossParameters) {
    for (double a = -0.5; a <= 0.3; a += 0.05) {
        const MapModel m{Family::TanhShift, a, 0.1};
        for (auto side : {Side::Lower, Side::Upper}) {
            const auto fp = fixed_point(m, side, std::log(2.0 + std::sqrt(3.0)), 4.0);
            EXPECT_LE(std::abs(eval_extremal(m, side, fp.x) - fp.x), 1e-11 * (1 + std::abs(fp.x)));
        }
    }
}

TEST(FixedPoint, NoSignChange) {
    const MapModel m{Family::TanhShift, 0.0, 0.1};
    try {
        fixed_point(m, Side::Lower, 5.0, 6.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NoSignChange);
        EXPECT_EQ(e.qualified(), "dynamics.NoSignChange");
    }
}

TEST(InvariantInterval, LinearIsSymmetricUnitNoiseBox) {
    for (double lam : {0.1, 0.5, 0.9}) {
        const MapModel m{Family::Linear, lam, 0.1};
        const auto iv = minimal_invariant_interval(m, 0.0);
        EXPECT_NEAR(iv.x_minus, -0.1, 1e-12);
        EXPECT_NEAR(iv.x_plus, 0.1, 1e-12);
        EXPECT_NEAR(lambda_true(m, iv), lam, 1e-15);
    }
}

TEST(InvariantInterval, TanhAtZero) {
    const MapModel m{Family::TanhShift, 0.0, 0.1};
    const auto iv = minimal_invariant_interval(m, 3.0);
    EXPECT_NEAR(iv.x_minus, 2.401775618891, 1e-10);
    EXPECT_NEAR(iv.x_plus, 2.734030570, 1e-8);
    const double lam = lambda_true(m, iv);
    EXPECT_NEAR(lam, 1.5 / std::pow(std::cosh(iv.x_minus / 2.0), 2), 1e-14);
}

TEST(InvariantInterval, ImageOfIntervalStaysInside) {
    for (const auto& m : kModels) {
        double seed = m.family == Family::Linear ? 0.0 : 3.0;
        InvariantInterval iv;
        try {
            iv = minimal_invariant_interval(m, seed);
        } catch (const Error&) {
            continue;
        }
        const double amp = noise_amplitude(m);
        for (int i = 0; i <= 1000; ++i) {
            const double x = iv.x_minus + iv.width() * i / 1000.0;
            EXPECT_GE(eval_map(m, x) - amp, iv.x_minus - 1e-12);
            EXPECT_LE(eval_map(m, x) + amp, iv.x_plus + 1e-12);
        }
    }
}

TEST(InvariantInterval, LambdaAtLeftEndOfTanhRange) {
    const MapModel m{Family::TanhShift, -0.5, 0.1};
    const double lam = lambda_true(m, minimal_invariant_interval(m, 3.0));
    EXPECT_GE(lam, 0.18);
    EXPECT_LE(lam, 0.26);
}

TEST(InvariantInterval, NoneBeyondFold) {
    try {
        minimal_invariant_interval({Family::TanhShift, 0.32, 0.1}, 3.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NoInterval);
    }
}

TEST(InvariantInterval, LambdaIncreasesTowardsFold) {
    double prev = 0.0;
    for (double a = -0.5; a < 0.315; a += 0.01) {
        const MapModel m{Family::TanhShift, a, 0.1};
        const double lam = lambda_true(m, minimal_invariant_interval(m, 3.0));
        EXPECT_GT(lam, prev);
        EXPECT_LT(lam, 1.0);
        prev = lam;
    }
}

TEST(Fold, TanhShiftClosedForm) {
    const double eps = 0.1;
    const auto fp = solve_fold(Family::TanhShift, eps, Side::Lower);
    const double x_star = std::log(2.0 + std::sqrt(3.0));
    const double a_star = std::sqrt(3.0) - eps - x_star;
    EXPECT_NEAR(fp.x_star, x_star, 1e-12);
    EXPECT_NEAR(fp.a_star, a_star, 1e-12);
    EXPECT_LE(fp.value_residual, 1e-12);
    EXPECT_LE(fp.derivative_residual, 1e-12);
}

TEST(Fold, TanhShiftUpperSideMirrors) {
    const auto lo = solve_fold(Family::TanhShift, 0.1, Side::Lower);
    const auto up = solve_fold(Family::TanhShift, 0.1, Side::Upper);
    EXPECT_NEAR(up.x_star, -lo.x_star, 1e-12);
    EXPECT_NEAR(up.a_star, -lo.a_star, 1e-12);
}

TEST(Fold, ModifiedTanhNearPointOneSeventyFive) {
    const auto fp = solve_fold(Family::ModifiedTanh, 0.8, Side::Lower);
    EXPECT_GE(fp.a_star, 0.170);
    EXPECT_LE(fp.a_star, 0.180);
    const MapModel m{Family::ModifiedTanh, fp.a_star, 0.8};
    EXPECT_NEAR(eval_map(m, fp.x_star) - 0.8, fp.x_star, 1e-10);
    EXPECT_NEAR(derivative(m, fp.x_star), 1.0, 1e-10);
}

TEST(Fold, BracketsIntervalExistence) {
    const auto fp = solve_fold(Family::TanhShift, 0.1, Side::Lower);
    EXPECT_NO_THROW(minimal_invariant_interval({Family::TanhShift, fp.a_star - 1e-4, 0.1}, 3.0));
    EXPECT_THROW(minimal_invariant_interval({Family::TanhShift, fp.a_star + 1e-4, 0.1}, 3.0), Error);
}

TEST(HittingTime, LinearClosedForm) {
    // f_-(x) = lam x - (1 - lam) eps, so f_-^n(x0) + eps = lam^n (x0 + eps).
    const double eps = 0.1;
    for (double lam : {0.3, 0.5, 0.8}) {
        const MapModel m{Family::Linear, lam, eps};
        for (double x : {-0.05, -0.09, -0.0999, -0.09999}) {
            const double x0 = 0.1;
            const double r = std::log((x + eps) / (x0 + eps)) / std::log(lam);
            auto n = static_cast<std::size_t>(std::ceil(r));
            if (std::abs(r - std::round(r)) < 1e-9) n = static_cast<std::size_t>(std::round(r)) + 1;
            EXPECT_EQ(hitting_time(m, x0, x), n) << "lam=" << lam << " x=" << x;
        }
    }
}

TEST(HittingTime, HalfLambdaFromOrigin) {
    const MapModel m{Family::Linear, 0.5, 0.1};
    EXPECT_EQ(hitting_time(m, 0.0, -0.09), 4u);
    EXPECT_EQ(hitting_time(m, 0.0, -0.0999), 10u);
    const double one_step = eval_extremal(m, Side::Lower, 0.0);
    EXPECT_EQ(hitting_time(m, 0.0, one_step + 1e-12), 1u);
}

TEST(HittingTime, Errors) {
    const MapModel m{Family::Linear, 0.5, 0.1};
    EXPECT_THROW(hitting_time(m, 0.0, 0.05), Error);
    try {
        hitting_time(m, 0.1, -0.2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Diverged);
    }
}

TEST(ParameterForLambda, HitsTarget) {
    for (double target : {0.24, 0.42, 0.65, 0.8}) {
        const double a = parameter_for_lambda(Family::TanhShift, 0.1, target, 3.0);
        const MapModel m{Family::TanhShift, a, 0.1};
        EXPECT_NEAR(lambda_true(m, minimal_invariant_interval(m, 3.0)), target, 1e-9);
    }
    EXPECT_DOUBLE_EQ(parameter_for_lambda(Family::Linear, 0.1, 0.42, 0.0), 0.42);
}
