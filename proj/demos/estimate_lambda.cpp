// Simulates the linear map at lambda = 0.684 and estimates lambda from the
// left tail of the histogram with both fitting bases and both boundary modes.

#include <cstdio>

#include "tailwarn/tailwarn.hpp"

using namespace tailwarn;

int main() {
    const MapModel m{Family::Linear, 0.684, 0.1};
    RngStream rng(2024, 0);
    const auto ts = generate(m, make_noise(m, NoiseKind::Uniform), 0.0, 100'000, rng, 1000);

    for (auto mode : {BoundaryMode::true_boundary(-0.1), BoundaryMode::estimated()}) {
        for (auto basis : {Basis::LeadingOrder, Basis::HigherOrder}) {
            EstimatorConfig cfg;
            cfg.boundary = mode;
            cfg.basis = basis;
            const auto est = estimate_lambda(ts.values, cfg);
            std::printf("%-9s %-7s lambda_hat = %.4f  (%zu tail points, a2 = %.4f)\n",
                        std::string(boundary_name(mode.kind)).c_str(), std::string(method_name(est.method)).c_str(),
                        est.lambda_hat, est.points.size(), est.coefficients->a2);
        }
    }
    std::printf("true lambda = %.4f\n", m.a);
}
