#pragma once

#include <cmath>
#include <limits>

#include "oisl/beam.hpp"
#include "oisl/constants.hpp"
#include "oisl/errors.hpp"
#include "oisl/pointing.hpp"
#include "oisl/rate.hpp"

namespace oisl {

// Relay-planning inputs: endpoints separated by chord L on a circular orbit
// of radius L_S, payload D under latency budget T_th, and the frequency
// search window.
struct constellation_config {
    double L;    // chord between source and destination, m
    double L_S;  // orbit radius, m
    double D;    // payload size, bit
    double T_th; // latency budget, s
    int N_max = 64;
    double f_min;    // Hz
    double f_max;    // Hz
    int f_points = 71;

    static constellation_config make(double L, double L_S, double D, double T_th,
                                     int N_max, double f_min, double f_max,
                                     int f_points) {
        if (!(L_S > 0.0)) throw invalid_parameter("constellation_config: L_S must be > 0");
        if (!(L > 0.0)) throw invalid_parameter("constellation_config: L must be > 0");
        if (L > 2.0 * L_S)
            throw singular_geometry("constellation_config: chord exceeds orbit diameter");
        if (!(D > 0.0)) throw invalid_parameter("constellation_config: D must be > 0");
        if (!(T_th > 0.0)) throw invalid_parameter("constellation_config: T_th must be > 0");
        if (N_max < 1) throw invalid_parameter("constellation_config: N_max must be >= 1");
        if (!(f_min > 0.0)) throw invalid_parameter("constellation_config: f_min must be > 0");
        if (!(f_max >= f_min))
            throw invalid_parameter("constellation_config: f_max must be >= f_min");
        if (f_min == f_max) {
            if (f_points < 1)
                throw invalid_parameter("constellation_config: f_points must be >= 1");
        } else if (f_points < 2) {
            throw invalid_parameter(
                "constellation_config: f_points must be >= 2 for a non-degenerate range");
        }
        return constellation_config{L, L_S, D, T_th, N_max, f_min, f_max, f_points};
    }
};

// Length of each of N equal hops along the orbit arc subtending chord L:
//     delta(N) = 2 L_S sin( arcsin(L / (2 L_S)) / N ).
inline double hop_distance(int N, double L, double L_S) {
    if (N < 1) throw invalid_parameter("hop_distance: N must be >= 1");
    if (!(L > 0.0) || !(L_S > 0.0))
        throw invalid_parameter("hop_distance: lengths must be > 0");
    if (L > 2.0 * L_S)
        throw singular_geometry("hop_distance: chord exceeds orbit diameter");
    if (N == 1) return L;  // sin(asin(x)) = x; short-circuit keeps it exact
    return 2.0 * L_S * std::sin(std::asin(L / (2.0 * L_S)) / static_cast<double>(N));
}

// Arc length subtended by chord L on a circle of radius L_S; the N -> inf
// limit of N * delta(N).
inline double arc_length(double L, double L_S) {
    if (!(L > 0.0) || !(L_S > 0.0))
        throw invalid_parameter("arc_length: lengths must be > 0");
    if (L > 2.0 * L_S)
        throw singular_geometry("arc_length: chord exceeds orbit diameter");
    return 2.0 * L_S * std::asin(L / (2.0 * L_S));
}

// Total transfer latency with N equally spaced hops: every hop carries the
// full payload, so the transmission time is N * D / R(delta(N)).  Returns
// +infinity when the hop is in outage.  Propagation delay N * delta / c is
// excluded unless requested.
inline double total_latency(int N, const constellation_config& config,
                            const beam_params& beam, const pointing_model& pointing,
                            double w_d, double h_th, const link_budget& budget,
                            bool include_propagation_delay = false) {
    const double delta = hop_distance(N, config.L, config.L_S);
    const rate_result r = avg_rate_analytic(delta, beam, pointing, w_d, h_th, budget);
    if (r.outage || !(r.value > 0.0)) return std::numeric_limits<double>::infinity();
    double latency = static_cast<double>(N) * config.D / r.value;
    if (include_propagation_delay)
        latency += static_cast<double>(N) * delta / speed_of_light;
    return latency;
}

struct constellation_plan {
    int N = 0;
    double delta = 0.0;         // hop length, m
    double per_hop_rate = 0.0;  // bit/s
    double total_latency = std::numeric_limits<double>::infinity();
    double f_used = 0.0;        // Hz
    bool feasible = false;
};

// Smallest hop count N in [1, N_max] whose total latency meets T_th at the
// fixed carrier frequency of `beam` — a plain exhaustive first-feasible
// scan.  When no N qualifies, the returned plan is marked infeasible and
// carries the argmin-latency N found.
inline constellation_plan min_satellites(const constellation_config& config,
                                         const beam_params& beam,
                                         const pointing_model& pointing, double w_d,
                                         double h_th, const link_budget& budget,
                                         bool include_propagation_delay = false) {
    constellation_plan best;
    best.N = 1;
    best.f_used = beam.f;
    for (int N = 1; N <= config.N_max; ++N) {
        const double latency = total_latency(N, config, beam, pointing, w_d, h_th,
                                             budget, include_propagation_delay);
        if (latency < best.total_latency) {
            best.N = N;
            best.total_latency = latency;
        }
        if (latency <= config.T_th) {
            const double delta = hop_distance(N, config.L, config.L_S);
            const rate_result r =
                avg_rate_analytic(delta, beam, pointing, w_d, h_th, budget);
            return constellation_plan{N, delta, r.value, latency, beam.f, true};
        }
    }
    best.delta = hop_distance(best.N, config.L, config.L_S);
    best.per_hop_rate =
        avg_rate_analytic(best.delta, beam, pointing, w_d, h_th, budget).value;
    best.feasible = false;
    return best;
}

struct frequency_choice {
    double f_star = 0.0;  // Hz
    double latency = std::numeric_limits<double>::infinity();
    bool feasible = false;
};

// Exhaustive search over the configured frequency grid minimizing the
// latency of an N-hop plan, followed by a golden-section refinement of the
// bracketing interval when the grid minimum is interior with finite
// neighbors.  The refined result is never worse than the best grid point.
inline frequency_choice optimize_frequency(int N, const constellation_config& config,
                                           double w0, const pointing_model& pointing,
                                           double w_d, double h_th,
                                           const link_budget& budget,
                                           bool include_propagation_delay = false) {
    auto latency_at = [&](double f) {
        return total_latency(N, config, beam_params::from_frequency(f, w0), pointing,
                             w_d, h_th, budget, include_propagation_delay);
    };

    const int points = config.f_min == config.f_max ? 1 : config.f_points;
    const double step =
        points > 1 ? (config.f_max - config.f_min) / static_cast<double>(points - 1) : 0.0;

    int best_index = -1;
    double best_f = config.f_min;
    double best_latency = std::numeric_limits<double>::infinity();
    std::vector<double> grid_latency(points);
    for (int i = 0; i < points; ++i) {
        const double f = config.f_min + step * static_cast<double>(i);
        grid_latency[i] = latency_at(f);
        if (grid_latency[i] < best_latency) {
            best_latency = grid_latency[i];
            best_f = f;
            best_index = i;
        }
    }
    if (best_index < 0) return {config.f_min, std::numeric_limits<double>::infinity(), false};

    if (best_index > 0 && best_index < points - 1 &&
        std::isfinite(grid_latency[best_index - 1]) &&
        std::isfinite(grid_latency[best_index + 1])) {
        // Golden-section refinement inside the bracketing interval.
        const double inv_phi = 0.6180339887498949;
        double a = config.f_min + step * static_cast<double>(best_index - 1);
        double b = config.f_min + step * static_cast<double>(best_index + 1);
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = latency_at(c);
        double fd = latency_at(d);
        while (b - a > 1e9) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = latency_at(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = latency_at(d);
            }
            if (fc < best_latency) {
                best_latency = fc;
                best_f = c;
            }
            if (fd < best_latency) {
                best_latency = fd;
                best_f = d;
            }
        }
    }
    return {best_f, best_latency, std::isfinite(best_latency)};
}

// Joint plan: exhaustive scan over N, each hop count individually
// frequency-optimized; returns the smallest feasible N with its optimal
// frequency, or the argmin-latency configuration marked infeasible.
inline constellation_plan joint_plan(const constellation_config& config, double w0,
                                     const pointing_model& pointing, double w_d,
                                     double h_th, const link_budget& budget,
                                     bool include_propagation_delay = false) {
    auto finish = [&](int N, const frequency_choice& choice, bool feasible) {
        const double delta = hop_distance(N, config.L, config.L_S);
        double rate = 0.0;
        if (std::isfinite(choice.latency)) {
            rate = avg_rate_analytic(delta,
                                     beam_params::from_frequency(choice.f_star, w0),
                                     pointing, w_d, h_th, budget)
                       .value;
        }
        return constellation_plan{N, delta, rate, choice.latency, choice.f_star, feasible};
    };

    int best_N = 1;
    frequency_choice best_choice;
    for (int N = 1; N <= config.N_max; ++N) {
        const frequency_choice choice = optimize_frequency(
            N, config, w0, pointing, w_d, h_th, budget, include_propagation_delay);
        if (choice.latency < best_choice.latency) {
            best_choice = choice;
            best_N = N;
        }
        if (choice.latency <= config.T_th) return finish(N, choice, true);
    }
    return finish(best_N, best_choice, false);
}

}  // namespace oisl
