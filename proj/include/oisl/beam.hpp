#pragma once

#include <cmath>

#include "oisl/constants.hpp"
#include "oisl/errors.hpp"

namespace oisl {

// Far-field divergence half-angle of a Gaussian beam: lambda / (pi * w0).
inline double divergence_angle(double lambda, double w0) {
    if (!(lambda > 0.0)) throw invalid_parameter("divergence_angle: lambda must be > 0");
    if (!(w0 > 0.0)) throw invalid_parameter("divergence_angle: w0 must be > 0");
    return lambda / (pi * w0);
}

// Transmitter optics: initial waist w0 and carrier frequency f, with the
// derived wavelength and divergence angle.  All lengths in meters, f in Hz.
struct beam_params {
    double w0;      // waist at the transmitter, m
    double f;       // carrier frequency, Hz
    double lambda;  // wavelength, m
    double theta;   // divergence angle, rad

    static beam_params from_frequency(double f, double w0) {
        if (!(f > 0.0)) throw invalid_parameter("beam_params: frequency must be > 0");
        if (!(w0 > 0.0)) throw invalid_parameter("beam_params: w0 must be > 0");
        beam_params b;
        b.w0 = w0;
        b.f = f;
        b.lambda = speed_of_light / f;
        b.theta = divergence_angle(b.lambda, w0);
        if (!(b.theta < 1e-3))
            throw invalid_parameter(
                "beam_params: divergence angle >= 1e-3 rad; outside the supported"
                " small-angle regime");
        return b;
    }
};

enum class waist_mode {
    exact,    // z * tan(theta) + w0: linear cone plus the launch waist
    farfield  // z * tan(theta): the launch waist is negligible at range
};

// Beam radius at range z.  All downstream channel statistics use farfield
// mode; exact mode exists to quantify the far-field approximation error.
inline double beam_waist(double z, const beam_params& beam, waist_mode mode) {
    if (!(z >= 0.0)) throw invalid_parameter("beam_waist: z must be >= 0");
    // tan(theta) kept literal rather than the small-angle theta.
    const double cone = z * std::tan(beam.theta);
    return mode == waist_mode::exact ? cone + beam.w0 : cone;
}

// Normalized transverse power intensity at radial offset r and range z:
//     I(r, z) = 2 / (pi * w_z^2) * exp(-2 r^2 / w_z^2),
// with w_z the far-field waist.  Integrates to 1 over the transverse plane.
inline double intensity(double r, double z, const beam_params& beam) {
    if (!(r >= 0.0)) throw invalid_parameter("intensity: r must be >= 0");
    if (!(z >= 0.0)) throw invalid_parameter("intensity: z must be >= 0");
    const double w_z = beam_waist(z, beam, waist_mode::farfield);
    if (w_z == 0.0)
        throw singular_geometry("intensity: far-field waist is zero at z = 0");
    const double q = r / w_z;
    return 2.0 / (pi * w_z * w_z) * std::exp(-2.0 * q * q);
}

}  // namespace oisl
