#pragma once

#include <random>

#include "cvpm/circuits.hpp"
#include "cvpm/displacement.hpp"
#include "cvpm/gaussian.hpp"

namespace cvpm::testing {

inline cx random_amp(std::mt19937_64& rng, double max_abs) {
    std::uniform_real_distribution<double> mag(0.0, max_abs);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * pi);
    return std::polar(mag(rng), ang(rng));
}

inline DisplacementProduct random_op(std::mt19937_64& rng, double max_abs = 2.0) {
    std::uniform_real_distribution<double> ang(-pi, pi);
    return {ang(rng), random_amp(rng, max_abs), random_amp(rng, max_abs)};
}

inline ProbeSpec random_probe(std::mt19937_64& rng, double max_disp = 1.0, double max_squeeze = 0.5) {
    std::uniform_real_distribution<double> r(-max_squeeze, max_squeeze);
    std::uniform_real_distribution<double> phi(0.0, 2.0 * pi);
    ProbeSpec p;
    p.disp = {random_amp(rng, max_disp), random_amp(rng, max_disp)};
    p.squeeze = {r(rng), r(rng)};
    p.rotation = {phi(rng), phi(rng)};
    return p;
}

// Random valid Gaussian state: squeezed/rotated/displaced product state
// plus an optional thermal floor (keeps the uncertainty relation valid).
inline GaussianState random_gaussian_state(std::mt19937_64& rng, double max_thermal = 0.5) {
    GaussianState pure = random_probe(rng).gaussian();
    std::uniform_real_distribution<double> t(0.0, max_thermal);
    Eigen::MatrixXd cov = pure.cov() + t(rng) * Eigen::MatrixXd::Identity(4, 4);
    return GaussianState(pure.mean(), cov);
}

}  // namespace cvpm::testing
