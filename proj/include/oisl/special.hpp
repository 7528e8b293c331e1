#pragma once

#include <algorithm>
#include <cmath>

#include "oisl/errors.hpp"
#include "oisl/quadrature.hpp"

namespace oisl {

// Request for 2F1(1, b; b+1; -x): the only hypergeometric family the rate
// formula needs.  b = gamma + 1 in context; x = SNR * y can reach ~1e12.
struct hyp2f1_request {
    double b;
    double x;
    double target_rel_err = 1e-12;

    static hyp2f1_request make(double b, double x, double target_rel_err = 1e-12) {
        if (!(b > 0.0)) throw invalid_parameter("hyp2f1_request: b must be > 0");
        if (!(x >= 0.0)) throw invalid_parameter("hyp2f1_request: x must be >= 0");
        if (!(target_rel_err >= 1e-14 && target_rel_err <= 1e-6))
            throw invalid_parameter(
                "hyp2f1_request: target_rel_err must lie in [1e-14, 1e-6]");
        return hyp2f1_request{b, x, target_rel_err};
    }
};

namespace detail {

// Direct power series sum_k b/(b+k) (-x)^k, geometric convergence for x <= 1/2.
inline double hyp2f1_series(double b, double x, double tol) {
    double sum = 0.0;
    double power = 1.0;  // (-x)^k
    double ratio = 1.0;
    for (int k = 0; k < 10000; ++k) {
        const double term = b / (b + k) * power;
        sum += term;
        ratio = std::abs(term) / std::abs(sum);
        if (ratio <= 0.25 * tol && k >= 2) return sum;
        power *= -x;
    }
    throw numerical_failure("hyp2f1_1b: power series did not converge", tol, ratio);
}

// Pfaff-transformed series: with u = x / (1 + x),
//     2F1(1, b; b+1; -x) = (1 / (1 + x)) * sum_k [k! / (b+1)_k] u^k.
// All terms positive and strictly decreasing, so there is no cancellation;
// used on the mid range where the direct series alternates too slowly.
inline double hyp2f1_pfaff(double b, double x, double tol) {
    const double u = x / (1.0 + x);
    double term = 1.0;
    double sum = 1.0;
    double tail = 1.0;
    for (int k = 1; k < 20000; ++k) {
        term *= u * k / (b + k);
        sum += term;
        // Remaining tail is bounded by term * u / (1 - u).
        tail = term * u / (1.0 - u) / sum;
        if (tail <= 0.5 * tol) return sum / (1.0 + x);
    }
    throw numerical_failure("hyp2f1_1b: transformed series did not converge", tol, tail);
}

// Integral representation b * int_0^1 t^(b-1) / (1 + x t) dt, split at the
// knee t = 1/x:
//   left  piece (tau = x t, then u = tau^b when b < 1 to remove the
//                endpoint singularity):  x^(-b) * int_0^1 tau^(b-1)/(1+tau) dtau
//   right piece (s = ln t):              int_{-ln x}^0 e^(b s) / (1 + x e^s) ds
// The x^(-b) prefactor is applied in log space; when it underflows the left
// piece is negligible against the right piece and is dropped.
inline double hyp2f1_integral(double b, double x, double tol) {
    quad_options opt;
    opt.rel_tol = 0.05 * tol;
    opt.abs_tol = 1e-300;
    opt.max_intervals = 4000;

    double left_log;  // log of int_0^1 tau^(b-1)/(1+tau) dtau
    if (b >= 1.0) {
        auto f = [&](double tau) {
            return std::exp((b - 1.0) * std::log(tau)) / (1.0 + tau);
        };
        // Quadrature nodes are strictly interior, so log(tau) stays finite.
        left_log = std::log(integrate_gk(f, 0.0, 1.0, opt).value);
    } else {
        auto f = [&](double u) { return 1.0 / (1.0 + std::exp(std::log(u) / b)); };
        left_log = std::log(integrate_gk(f, 0.0, 1.0, opt).value / b);
    }
    const double scaled = -b * std::log(x) + left_log;
    const double left = scaled < -740.0 ? 0.0 : std::exp(scaled);

    auto g = [&](double s) { return std::exp(b * s) / (1.0 + x * std::exp(s)); };
    const double right = integrate_gk(g, -std::log(x), 0.0, opt).value;

    return b * (left + right);
}

}  // namespace detail

// 2F1(1, b; b+1; -x) for b > 0, x >= 0.  Strategy ladder:
//   x <= 0.5   direct power series;
//   x <= 20    Pfaff transformation to argument x/(1+x) (positive terms);
//   x  > 20    integral representation with adaptive quadrature (transformed
//              arguments approach 1 there and series become impractical).
// b = 1 collapses to the closed form ln(1+x)/x.
inline double hyp2f1_1b(const hyp2f1_request& req) {
    const double b = req.b;
    const double x = req.x;
    const double tol = req.target_rel_err;
    if (x == 0.0) return 1.0;
    double value;
    if (b == 1.0)
        value = std::log1p(x) / x;
    else if (x <= 0.5)
        value = detail::hyp2f1_series(b, x, tol);
    else if (x <= 20.0)
        value = detail::hyp2f1_pfaff(b, x, tol);
    else
        value = detail::hyp2f1_integral(b, x, tol);
    return std::min(value, 1.0);
}

inline double hyp2f1_1b(double b, double x, double target_rel_err = 1e-12) {
    return hyp2f1_1b(hyp2f1_request::make(b, x, target_rel_err));
}

// The rate kernel K(y) = ln(1 + snr y) - (snr y / (g+1)) 2F1(1, g+1; g+2; -snr y).
// Equals Upsilon(y) / y^g, i.e. the Upsilon auxiliary with the overflow-prone
// power factored out; strictly positive for snr y > 0.
inline double upsilon_scaled(double y, double gamma_exp, double snr) {
    if (!(y > 0.0)) throw invalid_parameter("upsilon_scaled: y must be > 0");
    if (!(gamma_exp > 0.0)) throw invalid_parameter("upsilon_scaled: gamma must be > 0");
    if (!(snr > 0.0)) throw invalid_parameter("upsilon_scaled: snr must be > 0");
    const double sy = snr * y;
    return std::log1p(sy) - sy / (gamma_exp + 1.0) * hyp2f1_1b(gamma_exp + 1.0, sy);
}

// Upsilon auxiliary of the rate formula:
//     Upsilon(y) = y^g ln(1 + snr y) - (y^(g+1) / (g+1)) snr 2F1(1, g+1; g+2; -snr y)
// assembled as exp(g ln y + ln K(y)) so the power factor cannot overflow
// silently; overflow of the assembled value raises numerical_failure,
// underflow returns 0.
inline double upsilon(double y, double gamma_exp, double snr) {
    const double k = upsilon_scaled(y, gamma_exp, snr);
    if (k <= 0.0) return 0.0;  // snr*y -> 0 limit: both terms vanish
    const double log_value = gamma_exp * std::log(y) + std::log(k);
    if (log_value > 709.0)
        throw numerical_failure("upsilon: value overflows double", 709.0, log_value);
    return std::exp(log_value);
}

// Adaptive quadrature of Omega = int_{h_th}^{a0} ln(1 + snr y) y^(g-1) dy,
// the raw rate integral.  For g < 1 the substitution u = y^g removes the
// integrable endpoint singularity; the interval is split at y = 1/snr where
// the integrand's curvature peaks.  Relative error <= 1e-10.
inline double omega_quadrature(double h_th, double a0, double gamma_exp, double snr) {
    if (!(a0 > 0.0)) throw invalid_parameter("omega_quadrature: a0 must be > 0");
    if (!(h_th >= 0.0 && h_th <= a0))
        throw invalid_parameter("omega_quadrature: h_th must lie in [0, a0]");
    if (!(gamma_exp > 0.0)) throw invalid_parameter("omega_quadrature: gamma must be > 0");
    if (!(snr >= 0.0)) throw invalid_parameter("omega_quadrature: snr must be >= 0");
    if (h_th == a0 || snr == 0.0) return 0.0;

    quad_options opt;
    opt.rel_tol = 2e-11;
    opt.abs_tol = 1e-300;
    opt.max_intervals = 4000;

    const double g = gamma_exp;
    double lo, hi, split;
    double value = 0.0;
    if (g < 1.0) {
        // u = y^g:  Omega = (1/g) int ln(1 + snr u^(1/g)) du
        auto f = [&](double u) {
            return std::log1p(snr * std::exp(std::log(u) / g)) / g;
        };
        lo = h_th == 0.0 ? 0.0 : std::exp(g * std::log(h_th));
        hi = std::exp(g * std::log(a0));
        split = std::exp(-g * std::log(snr));
        if (split > lo && split < hi) {
            value = integrate_gk(f, lo, split, opt).value +
                    integrate_gk(f, split, hi, opt).value;
        } else {
            value = integrate_gk(f, lo, hi, opt).value;
        }
    } else {
        auto f = [&](double y) {
            if (y <= 0.0) return 0.0;
            return std::log1p(snr * y) * std::exp((g - 1.0) * std::log(y));
        };
        lo = h_th;
        hi = a0;
        split = 1.0 / snr;
        if (split > lo && split < hi) {
            value = integrate_gk(f, lo, split, opt).value +
                    integrate_gk(f, split, hi, opt).value;
        } else {
            value = integrate_gk(f, lo, hi, opt).value;
        }
    }
    return value;
}

}  // namespace oisl
