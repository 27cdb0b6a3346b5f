#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

#include "displacement.hpp"

namespace cvpm {

// Parametric optical imperfections. All identity values (V = 1, eps = 0,
// g2 = 0, zero residuals) reproduce the ideal pipeline bit-for-bit.
struct NoiseModel {
    double visibility_hadamard = 1.0;
    double visibility_sagnac = 1.0;
    std::optional<std::array<double, 6>> per_context_visibility;  // Row1..3, Col1..3
    double calib_eps_q = 0.0;  // fractional error on q0
    double calib_eps_p = 0.0;  // fractional error on p0
    cx residual_amp_x{0.0, 0.0};
    cx residual_amp_y{0.0, 0.0};
    double g2 = 0.0;  // multiphoton fraction, second-order correlation at zero delay
    double visibility_jitter_sd = 0.0;  // per-window contrast fluctuation

    void validate() const {
        auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
        if (!in01(visibility_hadamard) || !in01(visibility_sagnac))
            throw std::invalid_argument("NoiseModel: visibility outside [0,1]");
        if (per_context_visibility)
            for (double v : *per_context_visibility)
                if (!in01(v)) throw std::invalid_argument("NoiseModel: per-context visibility outside [0,1]");
        if (g2 < 0.0 || g2 >= 1.0) throw std::invalid_argument("NoiseModel: g2 must be in [0,1)");
        if (visibility_jitter_sd < 0.0) throw std::invalid_argument("NoiseModel: negative jitter sd");
    }

    double context_visibility(int context_index) const {
        if (per_context_visibility)
            return (*per_context_visibility)[static_cast<size_t>(context_index)];
        return visibility_hadamard;
    }
};

// Interferometric contrast: p -> 1/2 + V (p - 1/2).
inline double dephase(double p_ideal, double visibility) {
    return 0.5 + visibility * (p_ideal - 0.5);
}

inline SquareParams miscalibrate(const SquareParams& params, const NoiseModel& model) {
    return {params.q0 * (1.0 + model.calib_eps_q), params.p0 * (1.0 + model.calib_eps_p)};
}

// Multiphoton contamination shrinks the usable contrast; the quantitative
// rule (1 - g2) is a modeling choice, flagged as an assumption in reports.
inline double effective_visibility(const NoiseModel& model) {
    return model.visibility_hadamard * (1.0 - model.g2);
}

inline double effective_visibility(const NoiseModel& model, int context_index) {
    return model.context_visibility(context_index) * (1.0 - model.g2);
}

// Truncated normal around `mean`, clipped to [lo, hi] by rejection.
inline double truncated_normal(double mean, double sd, double lo, double hi, std::mt19937_64& rng) {
    if (sd == 0.0) return std::min(hi, std::max(lo, mean));
    std::normal_distribution<double> dist(mean, sd);
    for (int tries = 0; tries < 1000; ++tries) {
        double v = dist(rng);
        if (v >= lo && v <= hi) return v;
    }
    return std::min(hi, std::max(lo, mean));
}

}  // namespace cvpm
