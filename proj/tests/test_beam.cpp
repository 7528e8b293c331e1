#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oisl/beam.hpp"
#include "oisl/quadrature.hpp"

using oisl::beam_params;
using oisl::waist_mode;

namespace {
const beam_params beam200 = beam_params::from_frequency(200e12, 0.1);
const beam_params beam50 = beam_params::from_frequency(50e12, 0.1);
}  // namespace

TEST_CASE("divergence angle closed form", "[beam]") {
    // lambda = pi, w0 = 1: the pi cancels.
    REQUIRE(oisl::divergence_angle(oisl::pi, 1.0) == Catch::Approx(1.0).epsilon(1e-15));
    REQUIRE(beam200.lambda == Catch::Approx(1.49896229e-6).epsilon(1e-15));
    REQUIRE(beam200.theta == Catch::Approx(4.7713451592369423e-6).epsilon(1e-13));
    REQUIRE(beam50.theta == Catch::Approx(1.9085380636947769e-5).epsilon(1e-13));
    // Divergence is linear in lambda, so quartering f quadruples theta.
    REQUIRE(beam50.theta == Catch::Approx(4.0 * beam200.theta).epsilon(1e-15));
}

TEST_CASE("waist at range in both modes", "[beam]") {
    REQUIRE(oisl::beam_waist(0.0, beam200, waist_mode::exact) == 0.1);
    REQUIRE(oisl::beam_waist(0.0, beam200, waist_mode::farfield) == 0.0);
    const double far = oisl::beam_waist(1e6, beam200, waist_mode::farfield);
    REQUIRE(far == Catch::Approx(4.77134515927315).epsilon(1e-13));
    const double exact = oisl::beam_waist(1e6, beam200, waist_mode::exact);
    REQUIRE(exact == Catch::Approx(4.87134515927315).epsilon(1e-13));
    REQUIRE(exact - far == Catch::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("waist scaling laws", "[beam]") {
    const double w1 = oisl::beam_waist(1e6, beam200, waist_mode::farfield);
    const double w2 = oisl::beam_waist(2e6, beam200, waist_mode::farfield);
    REQUIRE(w2 == Catch::Approx(2.0 * w1).epsilon(1e-14));
    const beam_params beam400 = beam_params::from_frequency(400e12, 0.1);
    const double w_half = oisl::beam_waist(1e6, beam400, waist_mode::farfield);
    REQUIRE(w_half == Catch::Approx(0.5 * w1).epsilon(1e-10));
}

TEST_CASE("intensity peak and falloff", "[beam]") {
    const double w_z = oisl::beam_waist(1e6, beam200, waist_mode::farfield);
    const double peak = oisl::intensity(0.0, 1e6, beam200);
    REQUIRE(peak == Catch::Approx(0.027963945936490141).epsilon(1e-13));
    REQUIRE(oisl::intensity(w_z, 1e6, beam200) ==
            Catch::Approx(peak * std::exp(-2.0)).epsilon(1e-13));
}

TEST_CASE("intensity integrates to one over the transverse plane", "[beam]") {
    const double z = 1e6;
    const double w_z = oisl::beam_waist(z, beam200, waist_mode::farfield);
    auto radial = [&](double r) {
        return oisl::intensity(r, z, beam200) * 2.0 * oisl::pi * r;
    };
    oisl::quad_options opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-11;
    const double mass = oisl::integrate_gk(radial, 0.0, 10.0 * w_z, opt).value;
    REQUIRE(mass == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("intensity is monotone in r and in z", "[beam]") {
    double prev = oisl::intensity(0.0, 1e6, beam200);
    for (int i = 1; i <= 40; ++i) {
        const double cur = oisl::intensity(0.25 * i, 1e6, beam200);
        REQUIRE(cur < prev);
        prev = cur;
    }
    prev = oisl::intensity(1.0, 5e5, beam200);
    for (int i = 1; i <= 10; ++i) {
        const double cur = oisl::intensity(1.0, 5e5 + 1e5 * i, beam200);
        REQUIRE(cur < prev);
        prev = cur;
    }
}

TEST_CASE("beam parameter validation", "[beam]") {
    REQUIRE_THROWS_AS(oisl::divergence_angle(0.0, 1.0), oisl::invalid_parameter);
    REQUIRE_THROWS_AS(oisl::divergence_angle(1.0, -1.0), oisl::invalid_parameter);
    REQUIRE_THROWS_AS(beam_params::from_frequency(0.0, 0.1), oisl::invalid_parameter);
    REQUIRE_THROWS_AS(beam_params::from_frequency(200e12, 0.0), oisl::invalid_parameter);
    // 100 GHz at w0 = 0.1 m gives ~9.5e-3 rad, outside the small-angle regime.
    REQUIRE_THROWS_AS(beam_params::from_frequency(1e11, 0.1), oisl::invalid_parameter);
    REQUIRE_THROWS_AS(oisl::beam_waist(-1.0, beam200, waist_mode::exact),
                      oisl::invalid_parameter);
    REQUIRE_THROWS_AS(oisl::intensity(-1.0, 1e6, beam200), oisl::invalid_parameter);
    REQUIRE_THROWS_AS(oisl::intensity(1.0, 0.0, beam200), oisl::singular_geometry);
}
