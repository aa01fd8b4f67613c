// Locates the fold of the lower extremal map for f(x) = 3 tanh(x/2) - a and
// prints lambda along the branch, then compares an Ulam density tail with the
// lambda-dependent asymptotics at one parameter value.

#include <cstdio>

#include "tailwarn/tailwarn.hpp"

using namespace tailwarn;

int main() {
    const double eps = 0.1;
    const auto fp = solve_fold(Family::TanhShift, eps, Side::Lower);
    std::printf("fold: x* = %.10f  a* = %.10f\n", fp.x_star, fp.a_star);

    for (double a : {-0.4, -0.2, 0.0, 0.2, 0.3, 0.31}) {
        const MapModel m{Family::TanhShift, a, eps};
        const auto iv = minimal_invariant_interval(m, 3.0);
        std::printf("a = %5.2f  [x-, x+] = [%.5f, %.5f]  lambda = %.4f\n", a, iv.x_minus, iv.x_plus,
                    lambda_true(m, iv));
    }

    const MapModel m{Family::TanhShift, 0.0, eps};
    const auto iv = minimal_invariant_interval(m, 3.0);
    const auto u = ulam_density(m, make_noise(m, NoiseKind::Uniform), iv, 4096);
    const double ratio = tail_asymptotics_check(u, lambda_true(m, iv), {1, 64});
    std::printf("Ulam: %zu iterations, residual %.2e, tail ratio %.3f\n", u.iterations, u.residual, ratio);
}
