#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "oisl/errors.hpp"
#include "oisl/rng.hpp"

namespace oisl {

enum class sigma_mode { constant, exponential };

// Pointing-jitter scale model.  sigma_s0 is the per-axis standard deviation
// of the transverse deviation at the reference distance; in exponential mode
// the scale grows as sigma_s0 * exp(k0 * delta / d0).
struct pointing_model {
    double sigma_s0;  // m
    double k0;        // dimensionless growth rate
    double d0;        // reference distance, m
    sigma_mode mode;

    static pointing_model constant(double sigma_s0) {
        return make(sigma_s0, 0.0, 1.0, sigma_mode::constant);
    }

    static pointing_model exponential(double sigma_s0, double k0, double d0) {
        return make(sigma_s0, k0, d0, sigma_mode::exponential);
    }

    static pointing_model make(double sigma_s0, double k0, double d0, sigma_mode mode) {
        if (!(sigma_s0 > 0.0)) throw invalid_parameter("pointing_model: sigma_s0 must be > 0");
        if (!(d0 > 0.0)) throw invalid_parameter("pointing_model: d0 must be > 0");
        if (!(k0 >= 0.0)) throw invalid_parameter("pointing_model: k0 must be >= 0");
        return pointing_model{sigma_s0, k0, d0, mode};
    }
};

// Per-axis deviation scale at hop length delta.
inline double sigma_s(const pointing_model& model, double delta) {
    if (!(delta >= 0.0)) throw invalid_parameter("sigma_s: delta must be >= 0");
    if (model.mode == sigma_mode::constant) return model.sigma_s0;
    return model.sigma_s0 * std::exp(model.k0 * delta / model.d0);
}

// Density of the radial deviation r = sqrt(x^2 + y^2) of two independent
// zero-mean normals with per-axis standard deviation sigma:
//     f(r) = (r / sigma^2) * exp(-r^2 / (2 sigma^2)).
inline double rayleigh_pdf(double r, double sigma) {
    if (!(sigma > 0.0)) throw invalid_parameter("rayleigh_pdf: sigma must be > 0");
    if (!(r >= 0.0)) throw invalid_parameter("rayleigh_pdf: r must be >= 0");
    const double q = r / sigma;
    return q / sigma * std::exp(-0.5 * q * q);
}

// Matching distribution function 1 - exp(-r^2 / (2 sigma^2)).
inline double rayleigh_cdf(double r, double sigma) {
    if (!(sigma > 0.0)) throw invalid_parameter("rayleigh_cdf: sigma must be > 0");
    if (!(r >= 0.0)) throw invalid_parameter("rayleigh_cdf: r must be >= 0");
    const double q = r / sigma;
    return -std::expm1(-0.5 * q * q);
}

// Deterministic radial deviation samples r_i = sqrt(x_i^2 + y_i^2), x_i and
// y_i independent N(0, sigma^2).  Sample i is drawn from sub-stream
// i / mc_block_size (see rng.hpp), so the sequence for a given (seed, sigma,
// n) is identical regardless of platform or scheduling.
inline std::vector<double> sample_radial(std::uint64_t seed, double sigma, std::size_t n) {
    if (!(sigma > 0.0)) throw invalid_parameter("sample_radial: sigma must be > 0");
    if (n == 0) throw empty_sample("sample_radial: requested zero samples");
    std::vector<double> out;
    out.reserve(n);
    const std::size_t blocks = (n + mc_block_size - 1) / mc_block_size;
    for (std::size_t k = 0; k < blocks; ++k) {
        rng stream(seed, k);
        const std::size_t count = std::min(mc_block_size, n - k * mc_block_size);
        for (std::size_t i = 0; i < count; ++i) out.push_back(stream.rayleigh(sigma));
    }
    return out;
}

}  // namespace oisl
