#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace oisl {

// Base class for every exception thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A scalar argument or field violates a precondition (nonpositive length,
// zero denominator, tolerance outside its admissible window, ...).
class invalid_parameter : public error {
public:
    using error::error;
};

// A geometric configuration is degenerate: far-field quantities requested at
// zero range, a chord longer than the orbit diameter, and similar.
class singular_geometry : public error {
public:
    using error::error;
};

// An evaluation point lies outside the support of a distribution.  Kept
// distinct from invalid_parameter so callers can tell "bad model" from
// "bad evaluation point".
class domain_error : public error {
public:
    using error::error;
};

// A sampling routine was asked for zero samples.
class empty_sample : public error {
public:
    using error::error;
};

// An iterative numeric routine (adaptive quadrature, series evaluation)
// stopped without reaching the requested error bound.  Carries both the
// requested and the achieved bound for diagnostics.
class numerical_failure : public error {
public:
    numerical_failure(const std::string& context, double requested, double achieved)
        : error(format_message(context, requested, achieved)),
          requested_(requested),
          achieved_(achieved) {}

    double requested_bound() const noexcept { return requested_; }
    double achieved_bound() const noexcept { return achieved_; }

private:
    static std::string format_message(const std::string& context,
                                      double requested, double achieved) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      " (requested error bound %.3e, achieved %.3e)",
                      requested, achieved);
        return context + buf;
    }

    double requested_;
    double achieved_;
};

}  // namespace oisl
