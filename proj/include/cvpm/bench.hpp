#pragma once

#include <cmath>
#include <stdexcept>

#include "displacement.hpp"

namespace cvpm {

// Physical bench parameters of the displacement optics.
struct BenchParams {
    double wavelength = 940e-9;        // m
    double shear = 3e-3;               // m, beam-displacer separation
    double wedge_deflection = 0.0;     // rad; 0 means "derive from the pi/2 product"
    double farfield_distance = 3.0;    // m
    double length_scale = 1e-3;        // m, phase-space scale s

    void validate() const {
        if (wavelength <= 0 || shear <= 0 || farfield_distance <= 0 || length_scale <= 0)
            throw std::invalid_argument("BenchParams: all lengths must be positive");
    }
};

// Beam deflection produced by a transverse wavenumber shift: p_phys * lambda / (2 pi).
inline double tilt_from_p(double p_phys, double wavelength) {
    return p_phys * wavelength / (2.0 * pi);
}

inline double p_from_tilt(double tilt, double wavelength) {
    return tilt * 2.0 * pi / wavelength;
}

struct FarfieldShift {
    double shift;           // m
    bool small_angle_ok;    // tilt within the small-angle regime
};

inline FarfieldShift farfield_shift(double tilt, double distance) {
    return {tilt * distance, std::abs(tilt) < 1e-2};
}

struct DimensionlessMap {
    SquareParams params;
    double product;      // q0 * p0, independent of the length scale
    bool product_ok;     // true iff product = pi/2 within 1e-6
};

// Maps bench values to dimensionless displacement amplitudes. With scale s,
// q0 = shear / (sqrt(2) s) and p0 = sqrt(2) s k, k the wavenumber shift; the
// factors of sqrt(2) cancel so the product equals shear * k for any s.
inline DimensionlessMap dimensionless_map(const BenchParams& bench) {
    bench.validate();
    double tilt = bench.wedge_deflection;
    if (tilt == 0.0) tilt = tilt_from_p(pi / 2.0 / bench.shear, bench.wavelength);
    double k = p_from_tilt(tilt, bench.wavelength);
    double q0 = bench.shear / (std::sqrt(2.0) * bench.length_scale);
    double p0 = std::sqrt(2.0) * bench.length_scale * k;
    double product = q0 * p0;
    return {{q0, p0}, product, std::abs(product - pi / 2.0) < 1e-6};
}

// Inverse of dimensionless_map at the same length scale.
inline BenchParams physical_reconstruction(const SquareParams& params, double wavelength,
                                           double farfield_distance, double length_scale) {
    double shear = params.q0 * std::sqrt(2.0) * length_scale;
    double k = params.p0 / (std::sqrt(2.0) * length_scale);
    return {wavelength, shear, tilt_from_p(k, wavelength), farfield_distance, length_scale};
}

}  // namespace cvpm
