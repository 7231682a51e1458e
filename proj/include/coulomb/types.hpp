#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "coulomb/errors.hpp"

namespace coulomb {

using cx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Physical current constant kappa = hbar/(2 m l). It cancels in every ratio
// the library reports; kept named so the current formulas read like the
// textbook current definition instead of bare bilinears.
inline constexpr double kKappa = 1.0;

// Dimensionless parameters of the barrier problem: energy epsilon and Coulomb
// "power" u0, both in units of the recoil energy hbar^2/(2 m l^2). The length
// scale l is implicit and arbitrary.
struct PhysParams {
    double epsilon = 1.0;
    double u0 = 1.0;

    PhysParams() = default;
    PhysParams(double epsilon_, double u0_) : epsilon(epsilon_), u0(u0_) { validate(); }

    void validate() const {
        if (!(epsilon > 0.0) || !std::isfinite(epsilon))
            throw domain_error("PhysParams: epsilon must be strictly positive and finite");
        if (!(u0 > 0.0) || !std::isfinite(u0))
            throw domain_error("PhysParams: u0 must be strictly positive and finite");
    }

    // Wave number sqrt(epsilon).
    double k() const { return std::sqrt(epsilon); }
    // Coulomb strength y = u0 / (2 sqrt(epsilon)); the hypergeometric
    // parameter of every solution is a = 1 - i*y.
    double y() const { return u0 / (2.0 * std::sqrt(epsilon)); }
    cx hyp_a() const { return cx(1.0, -y()); }
};

// The four amplitudes of the general solutions on the two sides of the origin.
struct AmplitudeSet {
    cx a_l1{0.0, 0.0};
    cx a_l2{0.0, 0.0};
    cx a_r1{0.0, 0.0};
    cx a_r2{0.0, 0.0};
};

// A nonzero complex number kept as log|w| and arg(w). Survives magnitudes far
// outside double range; used by the deep-suppression path where amplitudes
// scale like exp(-3*pi*y/2).
struct LogComplex {
    double log_mag = -std::numeric_limits<double>::infinity();
    double phase = 0.0;

    static LogComplex zero() { return {}; }

    static LogComplex from(cx v) {
        if (v == cx(0.0, 0.0)) return zero();
        return {std::log(std::abs(v)), std::arg(v)};
    }

    bool is_zero() const { return log_mag == -std::numeric_limits<double>::infinity(); }

    cx value() const {
        if (is_zero()) return {0.0, 0.0};
        if (log_mag < -745.0) return {0.0, 0.0};  // below double range
        if (log_mag > 709.0)
            return {std::numeric_limits<double>::infinity(), 0.0};
        return std::polar(std::exp(log_mag), phase);
    }

    bool underflows_double() const { return !is_zero() && log_mag < -745.0; }

    friend LogComplex operator*(LogComplex a, LogComplex b) {
        if (a.is_zero() || b.is_zero()) return zero();
        return {a.log_mag + b.log_mag, a.phase + b.phase};
    }
    friend LogComplex operator/(LogComplex a, LogComplex b) {
        if (a.is_zero()) return zero();
        return {a.log_mag - b.log_mag, a.phase - b.phase};
    }
    LogComplex negated() const {
        if (is_zero()) return zero();
        return {log_mag, phase + kPi};
    }
};

// Sum of log-represented terms, factored around the largest magnitude so the
// O(1) bracket is formed in ordinary doubles.
inline LogComplex log_sum(std::initializer_list<LogComplex> terms) {
    double lead = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms) lead = std::max(lead, t.log_mag);
    if (lead == -std::numeric_limits<double>::infinity()) return LogComplex::zero();
    cx bracket{0.0, 0.0};
    for (const auto& t : terms) {
        if (t.is_zero()) continue;
        bracket += std::polar(std::exp(t.log_mag - lead), t.phase);
    }
    if (bracket == cx(0.0, 0.0)) return LogComplex::zero();
    return {lead + std::log(std::abs(bracket)), std::arg(bracket)};
}

}  // namespace coulomb
