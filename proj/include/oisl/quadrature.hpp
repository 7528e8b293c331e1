#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "oisl/errors.hpp"

namespace oisl {

struct quad_options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_intervals = 4096;
};

struct quad_result {
    double value = 0.0;
    double error_bound = 0.0;  // estimated absolute error of `value`
    int intervals = 0;         // leaf intervals in the final partition
};

namespace detail {

// 15-point Gauss-Kronrod rule on [a, b] with the embedded 7-point Gauss rule
// supplying the error estimate.  Nodes/weights and the error-scaling rule
// follow the classic QUADPACK dqk15 formulation.
struct gk15_eval {
    double value;
    double error;
    double resabs;  // integral of |f|
};

template <class F>
gk15_eval gk15(F& f, double a, double b) {
    // Abscissae (descending), Kronrod weights, and Gauss weights.
    static constexpr double xgk[8] = {
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144838258730,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000};
    static constexpr double wgk[8] = {
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714};
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327};

    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);
    const double dhlgth = std::abs(hlgth);

    const double fc = f(centr);
    double resg = wg[3] * fc;
    double resk = wgk[7] * fc;
    double resabs = std::abs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double absc = hlgth * xgk[j];
        const double f1 = f(centr - absc);
        const double f2 = f(centr + absc);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += wgk[j] * (f1 + f2);
        resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
    }

    const double reskh = 0.5 * resk;
    double resasc = wgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    gk15_eval out;
    out.value = resk * hlgth;
    out.resabs = resabs * dhlgth;
    resasc *= dhlgth;

    double err = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();
    if (out.resabs > uflow / (50.0 * eps))
        err = std::max(err, 50.0 * eps * out.resabs);
    out.error = err;
    return out;
}

struct quad_interval {
    double a, b, value, error;
    bool operator<(const quad_interval& o) const { return error < o.error; }
};

}  // namespace detail

// Globally adaptive integration of f over [a, b]: the interval with the
// largest estimated error is bisected until
//     total_error <= max(abs_tol, rel_tol * |total_value|)
// or the interval budget is exhausted (-> numerical_failure carrying the
// achieved bound).
template <class F>
quad_result integrate_gk(F&& f, double a, double b, quad_options opt = {}) {
    if (!(a <= b)) throw invalid_parameter("integrate_gk: interval bounds out of order");
    quad_result out;
    if (a == b) return out;

    std::priority_queue<detail::quad_interval> heap;
    auto first = detail::gk15(f, a, b);
    double total_value = first.value;
    double total_error = first.error;
    heap.push({a, b, first.value, first.error});
    int leaves = 1;

    auto tolerance = [&](double v) { return std::max(opt.abs_tol, opt.rel_tol * std::abs(v)); };

    while (total_error > tolerance(total_value) && leaves < opt.max_intervals) {
        const detail::quad_interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval no longer splittable in double precision; put it back
            // and stop refining.
            heap.push(worst);
            break;
        }
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.value, left.error});
        heap.push({mid, worst.b, right.value, right.error});
        ++leaves;
    }

    out.value = total_value;
    out.error_bound = total_error;
    out.intervals = leaves;
    if (total_error > tolerance(total_value))
        throw numerical_failure("integrate_gk: adaptive refinement did not converge",
                                tolerance(total_value), total_error);
    return out;
}

}  // namespace oisl
