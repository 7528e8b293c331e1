#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oisl/special.hpp"
#include "support/tanhsinh.hpp"

using oisl::hyp2f1_1b;
using oisl::omega_quadrature;
using oisl::upsilon;

namespace {

// Independent evaluation of 2F1(1, b; b+1; -x) as b * int_0^1 t^(b-1)/(1+xt) dt
// by double-exponential quadrature (no code shared with the production path).
double hyp_oracle(double b, double x) {
    auto f = [&](double, double da, double) {
        return std::exp((b - 1.0) * std::log(da)) / (1.0 + x * da);
    };
    return b * testsupport::tanh_sinh(f, 0.0, 1.0, 1e-13, 13);
}

}  // namespace

TEST_CASE("hypergeometric term against frozen reference values", "[special]") {
    struct row {
        double b, x, expected;
    };
    const row rows[] = {
        {1.05, 1e-3, 0.99948814888129235}, {1.05, 1.0, 0.68687334346094853},
        {1.05, 1e3, 0.0060729292841186484}, {1.05, 1e8, 1.2605270050924134e-7},
        {1.05, 1e11, 1.5056986313694861e-10},
        {1.5, 1e-3, 0.99940042823836773},  {1.5, 1.0, 0.64380550980765507},
        {1.5, 1e3, 0.0028539801766126302}, {1.5, 1e8, 2.9995287911019614e-8},
        {1.5, 1e11, 2.9999850981476013e-11},
        {2.0, 1e-3, 0.99933383293366638},  {2.0, 1.0, 0.61370563888010938},
        {2.0, 1e3, 0.0019861824904413696}, {2.0, 1e8, 1.9999996315863849e-8},
        {2.0, 1e11, 1.9999999994934313e-11},
        {4.0, 1e-3, 0.99920066609573765},  {4.0, 1.0, 0.5607446110935521},
        {4.0, 1e3, 0.0013313373056983142}, {4.0, 1e8, 1.3333333133333337e-8},
        {4.0, 1e11, 1.3333333333133333e-11},
    };
    for (const auto& t : rows) {
        REQUIRE(hyp2f1_1b(t.b, t.x) == Catch::Approx(t.expected).epsilon(1e-10));
    }
}

TEST_CASE("hypergeometric term against the integral-representation oracle",
          "[special]") {
    for (double b : {1.05, 1.5, 2.0, 4.0}) {
        for (double x : {1e-3, 1.0, 1e3, 1e8, 1e11}) {
            REQUIRE(hyp2f1_1b(b, x) ==
                    Catch::Approx(hyp_oracle(b, x)).epsilon(1e-10));
        }
    }
    // A fractional b < 1 exercises the substituted left piece.
    for (double x : {0.1, 7.0, 1e4, 1e9}) {
        REQUIRE(hyp2f1_1b(0.4, x) == Catch::Approx(hyp_oracle(0.4, x)).epsilon(1e-10));
    }
    // Production-scale point.
    REQUIRE(hyp2f1_1b(1.5, 2.25e8) ==
            Catch::Approx(1.3331937129190997e-8).epsilon(1e-10));
}

TEST_CASE("hypergeometric special values", "[special]") {
    REQUIRE(hyp2f1_1b(3.7, 0.0) == 1.0);
    for (double x : {1e-4, 0.3, 2.0, 50.0, 1e7}) {
        REQUIRE(hyp2f1_1b(1.0, x) ==
                Catch::Approx(std::log1p(x) / x).epsilon(1e-12));
        // Continuity across the b = 1 fast path.
        REQUIRE(hyp2f1_1b(1.0 + 1e-12, x) ==
                Catch::Approx(std::log1p(x) / x).epsilon(1e-9));
    }
}

TEST_CASE("hypergeometric term is decreasing in x and bounded by (0, 1]",
          "[special]") {
    for (double b : {0.5, 1.3, 6.0}) {
        double prev = hyp2f1_1b(b, 0.0);
        REQUIRE(prev == 1.0);
        for (double x = 0.1; x < 1e12; x *= 7.0) {
            const double cur = hyp2f1_1b(b, x);
            REQUIRE(cur > 0.0);
            REQUIRE(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("large-argument asymptote", "[special]") {
    // For x >> 1, b > 1: F ~ (b/(b-1)) / x to leading order.
    REQUIRE(hyp2f1_1b(2.0, 1e10) == Catch::Approx(2e-10).epsilon(0.01));
    REQUIRE(hyp2f1_1b(2.0, 1e10) ==
            Catch::Approx(1.9999999953948298e-10).epsilon(1e-10));
}

TEST_CASE("request validation", "[special]") {
    using oisl::hyp2f1_request;
    REQUIRE_THROWS_AS(hyp2f1_request::make(0.0, 1.0), oisl::invalid_parameter);
    REQUIRE_THROWS_AS(hyp2f1_request::make(1.0, -1.0), oisl::invalid_parameter);
    REQUIRE_THROWS_AS(hyp2f1_request::make(1.0, 1.0, 1e-15), oisl::invalid_parameter);
    REQUIRE_THROWS_AS(hyp2f1_request::make(1.0, 1.0, 1e-5), oisl::invalid_parameter);
    REQUIRE_NOTHROW(hyp2f1_request::make(1.0, 1.0, 1e-8));
}

TEST_CASE("auxiliary rate function analytic value", "[special]") {
    // At exponent 1 and unit snr:  int_0^1 ln(1+y) dy = 2 ln 2 - 1.
    REQUIRE(upsilon(1.0, 1.0, 1.0) ==
            Catch::Approx(0.38629436111989062).epsilon(1e-12));
}

TEST_CASE("auxiliary rate function equals its integral form", "[special]") {
    for (double x : {1e-6, 3e-5, 1e-3}) {
        for (double g : {0.05, 0.8, 3.0}) {
            for (double s : {1e6, 1e9, 1e12}) {
                auto f = [&](double, double da, double) {
                    return std::log1p(s * da) * std::exp((g - 1.0) * std::log(da));
                };
                const double integral =
                    g * testsupport::tanh_sinh(f, 0.0, x, 1e-12, 13);
                REQUIRE(upsilon(x, g, s) == Catch::Approx(integral).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("auxiliary rate function is increasing in x", "[special]") {
    double prev = 0.0;
    for (double x = 1e-6; x <= 1e-3; x *= 2.0) {
        const double cur = upsilon(x, 0.7, 2.25e11);
        REQUIRE(cur > prev);
        prev = cur;
    }
}

TEST_CASE("auxiliary rate function overflow is reported", "[special]") {
    REQUIRE_THROWS_AS(upsilon(10.0, 400.0, 1.0), oisl::numerical_failure);
}

TEST_CASE("raw rate integral against the closed form", "[special]") {
    for (double a0 : {1e-5, 1e-3}) {
        for (double g : {0.05, 0.8, 3.0}) {
            for (double s : {1e6, 1e9, 1e12}) {
                for (double frac : {0.0, 0.01, 0.5}) {
                    const double h_th = frac * a0;
                    const double closed =
                        (upsilon(a0, g, s) -
                         (h_th > 0.0 ? upsilon(h_th, g, s) : 0.0)) /
                        g;
                    REQUIRE(omega_quadrature(h_th, a0, g, s) ==
                            Catch::Approx(closed).epsilon(1e-8));
                }
            }
        }
    }
}

TEST_CASE("raw rate integral analytic special case", "[special]") {
    REQUIRE(omega_quadrature(0.0, 1.0, 1.0, 1.0) ==
            Catch::Approx(0.38629436111989062).epsilon(1e-10));
    REQUIRE(omega_quadrature(0.5, 0.5, 2.0, 1e9) == 0.0);
    REQUIRE_THROWS_AS(omega_quadrature(2.0, 1.0, 1.0, 1.0), oisl::invalid_parameter);
    REQUIRE_THROWS_AS(omega_quadrature(0.0, 1.0, 0.0, 1.0), oisl::invalid_parameter);
}
