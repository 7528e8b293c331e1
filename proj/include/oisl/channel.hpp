#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "oisl/beam.hpp"
#include "oisl/errors.hpp"
#include "oisl/pointing.hpp"
#include "oisl/quadrature.hpp"
#include "oisl/rng.hpp"

namespace oisl {

// Geometry of a single hop as seen by the receiver: range, beam waist at
// range, detector radius, and per-axis pointing deviation at this range.
struct channel_geometry {
    double z;      // hop distance, m
    double w_z;    // beam waist at the receiver, m
    double w_d;    // detector radius, m
    double sigma;  // per-axis pointing deviation, m

    static channel_geometry make(double z, double w_z, double w_d, double sigma) {
        if (!(z > 0.0)) throw invalid_parameter("channel_geometry: z must be > 0");
        if (!(w_z > 0.0)) throw invalid_parameter("channel_geometry: w_z must be > 0");
        if (!(w_d > 0.0)) throw invalid_parameter("channel_geometry: w_d must be > 0");
        if (!(sigma > 0.0)) throw invalid_parameter("channel_geometry: sigma must be > 0");
        return channel_geometry{z, w_z, w_d, sigma};
    }

    static channel_geometry from_beam(double z, const beam_params& beam, double w_d,
                                      double sigma) {
        return make(z, beam_waist(z, beam, waist_mode::farfield), w_d, sigma);
    }
};

// The analytic channel statistics assume the detector is small relative to
// the beam footprint; this predicate reports whether a geometry is inside
// that regime.  Evaluation outside it is permitted (callers may emit a
// diagnostic) but the closed forms degrade.
inline bool farfield_valid(const channel_geometry& geom) {
    return geom.w_z / geom.w_d >= 100.0;
}

// Peak collected power fraction: the value of the overlap at zero offset
// under the small-detector approximation, A0 = 2 w_d^2 / w_z^2.
inline double peak_fraction(const channel_geometry& geom) {
    const double q = geom.w_d / geom.w_z;
    return 2.0 * q * q;
}

// Power-law exponent of the collected-fraction distribution,
// gamma = w_z^2 / (4 sigma^2).
inline double gamma_exponent(const channel_geometry& geom) {
    const double q = geom.w_z / geom.sigma;
    return 0.25 * q * q;
}

// Detector sensitivity threshold p_th normalized by the deterministic link
// gains: h_th = p_th / (h_PL * eta * P_T).
struct detector_spec {
    double p_th;  // sensitivity power threshold, W
    double eta;   // responsivity, dimensionless
    double h_PL;  // path loss factor, dimensionless
    double P_T;   // transmit power, W

    static detector_spec make(double p_th, double eta, double h_PL, double P_T) {
        if (!(p_th >= 0.0)) throw invalid_parameter("detector_spec: p_th must be >= 0");
        if (!(eta > 0.0 && eta <= 1.0)) throw invalid_parameter("detector_spec: eta must be in (0, 1]");
        if (!(h_PL > 0.0 && h_PL <= 1.0)) throw invalid_parameter("detector_spec: h_PL must be in (0, 1]");
        if (!(P_T > 0.0)) throw invalid_parameter("detector_spec: P_T must be > 0");
        return detector_spec{p_th, eta, h_PL, P_T};
    }
};

inline double h_threshold(const detector_spec& det) {
    const double denom = det.h_PL * det.eta * det.P_T;
    if (!(denom > 0.0)) throw invalid_parameter("h_threshold: zero denominator");
    return det.p_th / denom;
}

// Largest radial deviation at which the collected fraction still meets a
// threshold.  Three outcomes: a finite radius, "unbounded" (threshold zero:
// every offset qualifies), or "outage" (threshold above the zero-offset
// peak: no offset qualifies).
struct radial_limit {
    enum class kind { finite, unbounded, outage };
    kind state = kind::finite;
    double value = 0.0;  // meaningful only when state == finite

    bool is_finite() const { return state == kind::finite; }
    bool is_unbounded() const { return state == kind::unbounded; }
    bool is_outage() const { return state == kind::outage; }
};

inline radial_limit r_max(const channel_geometry& geom, double h_th) {
    if (!(h_th >= 0.0)) throw invalid_parameter("r_max: h_th must be >= 0");
    const double A0 = peak_fraction(geom);
    if (h_th == 0.0) return {radial_limit::kind::unbounded, 0.0};
    if (h_th > A0) return {radial_limit::kind::outage, 0.0};
    // Invert A0 * exp(-2 r^2 / w_z^2) = h_th; h_th == A0 gives exactly 0.
    const double value = geom.w_z * std::sqrt(0.5 * std::log(A0 / h_th));
    return {radial_limit::kind::finite, value};
}

// Derived per-hop channel statistics bundle.
struct channel_stats {
    double A0;
    double gamma;
    double h_th;
    radial_limit max_radius;
};

inline channel_stats make_channel_stats(const channel_geometry& geom, double h_th) {
    return channel_stats{peak_fraction(geom), gamma_exponent(geom), h_th, r_max(geom, h_th)};
}

// Collected power fraction at radial offset r, small-detector approximation:
//     h(r) = A0 * exp(-2 r^2 / w_z^2).
inline double h_pe_approx(double r, const channel_geometry& geom) {
    if (!(r >= 0.0)) throw invalid_parameter("h_pe_approx: r must be >= 0");
    const double q = r / geom.w_z;
    return peak_fraction(geom) * std::exp(-2.0 * q * q);
}

// Collected power fraction at radial offset r, evaluated as the literal
// overlap integral of the Gaussian intensity over the detector disc:
//
//     h(r) = (2 / pi w_z^2) * int_{x^2+y^2 <= w_d^2} e^{-2((x-r)^2+y^2)/w_z^2} dx dy
//
// via nested adaptive 1-D quadrature in Cartesian coordinates (outer in x,
// inner in y).  Serves as the independent oracle for h_pe_approx.
// Absolute error <= 1e-10 guaranteed; relative error ~1e-10 in practice.
inline double h_pe_exact(double r, const channel_geometry& geom) {
    if (!(r >= 0.0)) throw invalid_parameter("h_pe_exact: r must be >= 0");
    const double w_z = geom.w_z;
    const double w_d = geom.w_d;
    const double norm = 2.0 / (pi * w_z * w_z);

    quad_options inner_opt;
    inner_opt.rel_tol = 3e-12;
    inner_opt.abs_tol = 1e-300;
    inner_opt.max_intervals = 2000;

    auto column = [&](double x) {
        const double dx = x - r;
        const double gx = norm * std::exp(-2.0 * dx * dx / (w_z * w_z));
        if (gx == 0.0) return 0.0;
        const double half_span = std::sqrt(std::max(0.0, w_d * w_d - x * x));
        auto slice = [&](double y) { return std::exp(-2.0 * y * y / (w_z * w_z)); };
        return gx * integrate_gk(slice, -half_span, half_span, inner_opt).value;
    };

    quad_options outer_opt;
    outer_opt.rel_tol = 1e-11;
    outer_opt.abs_tol = 1e-300;
    outer_opt.max_intervals = 2000;
    const double value = integrate_gk(column, -w_d, w_d, outer_opt).value;
    return std::clamp(value, 0.0, 1.0);
}

// Density of the collected fraction y = A0 * exp(-2 r^2 / w_z^2) when r is
// Rayleigh(sigma):  f(y) = (gamma / y) * (y / A0)^gamma on (0, A0].
// Assembled as exp(gamma * log(y / A0)) so large gamma cannot overflow.
inline double pdf_h_pe(double y, const channel_geometry& geom) {
    const double A0 = peak_fraction(geom);
    if (!(y > 0.0 && y <= A0))
        throw domain_error("pdf_h_pe: y outside the support (0, A0]");
    const double g = gamma_exponent(geom);
    return g / y * std::exp(g * std::log(y / A0));
}

// Distribution function of the collected fraction: (y / A0)^gamma on
// (0, A0], exactly 1 at and above A0.
inline double cdf_h_pe(double y, const channel_geometry& geom) {
    if (!(y > 0.0)) throw domain_error("cdf_h_pe: y must be > 0");
    const double A0 = peak_fraction(geom);
    if (y >= A0) return 1.0;
    const double g = gamma_exponent(geom);
    return std::clamp(std::exp(g * std::log(y / A0)), 0.0, 1.0);
}

// Density of the collected fraction for an arbitrary radial deviation law:
// change of variables through r(y) = sqrt((w_z^2 / 2) * ln(A0 / y)),
//     f(y) = f_R(r(y)) * w_z^2 / (4 y r(y)).
// At y = A0 the composition is a 0 * inf form; it is evaluated as the
// one-sided limit f_R(r)/r as r -> 0 (finite for laws vanishing linearly at
// the origin, e.g. any Rayleigh).
template <class RadialPdf>
double general_pdf_h_pe(double y, const channel_geometry& geom, RadialPdf&& radial_pdf) {
    const double A0 = peak_fraction(geom);
    if (!(y > 0.0 && y <= A0))
        throw domain_error("general_pdf_h_pe: y outside the support (0, A0]");
    const double w_z = geom.w_z;
    const double r = w_z * std::sqrt(std::max(0.0, 0.5 * std::log(A0 / y)));
    if (r > 0.0) return radial_pdf(r) * w_z * w_z / (4.0 * y * r);
    const double eps = w_z * 1e-9;
    return radial_pdf(eps) / eps * w_z * w_z / (4.0 * y);
}

// Average collected fraction with values below h_th discarded:
//     E[h * 1{h >= h_th}] = (gamma / (gamma + 1)) * A0 * (1 - (h_th / A0)^(gamma + 1)).
// The power is taken in log space; at h_th = 0 this reduces to
// 2 w_d^2 / (w_z^2 + 4 sigma^2) exactly.
inline double mean_h_pe(const channel_geometry& geom, double h_th) {
    if (!(h_th >= 0.0)) throw invalid_parameter("mean_h_pe: h_th must be >= 0");
    const double A0 = peak_fraction(geom);
    if (h_th >= A0) return 0.0;  // total outage: nothing is ever collected
    const double g = gamma_exponent(geom);
    const double tail =
        h_th == 0.0 ? 0.0 : std::exp((g + 1.0) * std::log(h_th / A0));
    return g / (g + 1.0) * A0 * (1.0 - tail);
}

struct channel_moments {
    double mean;                 // thresholded mean of the collected fraction
    double capture_probability;  // fraction of samples with r <= r_max
};

// Monte Carlo estimate of the thresholded mean and the capture probability.
// Samples follow the sub-stream contract (fixed 65536-sample blocks, one
// sub-stream per block, partial sums merged pairwise in index order), so the
// result depends only on (seed, geom, h_th, n).
inline channel_moments mc_channel_moments(std::uint64_t seed, const channel_geometry& geom,
                                          double h_th, std::size_t n) {
    if (n == 0) throw empty_sample("mc_channel_moments: requested zero samples");
    if (n < 10000)
        throw invalid_parameter("mc_channel_moments: n must be >= 10^4");
    if (!(h_th >= 0.0)) throw invalid_parameter("mc_channel_moments: h_th must be >= 0");

    const double A0 = peak_fraction(geom);
    const double w_z2 = geom.w_z * geom.w_z;
    const radial_limit limit = r_max(geom, h_th);

    const std::size_t blocks = (n + mc_block_size - 1) / mc_block_size;
    std::vector<double> sum_h(blocks, 0.0);
    std::vector<double> captured(blocks, 0.0);
    for (std::size_t k = 0; k < blocks; ++k) {
        rng stream(seed, k);
        const std::size_t count = std::min(mc_block_size, n - k * mc_block_size);
        double local_h = 0.0;
        double local_captured = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const double r = stream.rayleigh(geom.sigma);
            const double h = A0 * std::exp(-2.0 * r * r / w_z2);
            if (h >= h_th) local_h += h;
            const bool in =
                limit.is_unbounded() || (limit.is_finite() && r <= limit.value);
            if (in) local_captured += 1.0;
        }
        sum_h[k] = local_h;
        captured[k] = local_captured;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    return channel_moments{pairwise_sum(std::move(sum_h)) * inv_n,
                           pairwise_sum(std::move(captured)) * inv_n};
}

}  // namespace oisl
