#pragma once

// Complex special functions for the barrier problem: principal-branch log
// gamma, digamma, Kummer's 1F1(a,b,z), and Tricomi's U(a,2,z) in the
// logarithmic integer-b case, with z-derivatives.
//
// Evaluation scheme: Taylor series with compensated (double-double)
// accumulation for |z| up to SeriesControl::asymptotic_switch, the standard
// two-sector large-z expansion beyond it. The asymptotic expansion is accepted
// only when its min-term error estimate meets the tolerance; otherwise the
// series path is used regardless of |z|. Kummer's transformation moves
// Re z < 0 arguments into the right half plane first.

#include <complex>

#include "coulomb/errors.hpp"
#include "coulomb/types.hpp"

namespace coulomb::cfun {

// Controls for series/asymptotic evaluation.
struct SeriesControl {
    double tol = 1e-12;             // relative termination tolerance
    int max_terms = 10000;          // series length cap
    double asymptotic_switch = 30.0;  // |z| above which the large-z expansion is tried

    void validate() const {
        if (!(tol > 0.0 && tol < 1.0))
            throw domain_error("SeriesControl: tol must be in (0,1)");
        if (max_terms < 10)
            throw domain_error("SeriesControl: max_terms must be >= 10");
        if (!(asymptotic_switch > 0.0))
            throw domain_error("SeriesControl: asymptotic_switch must be > 0");
    }
};

enum class Method { taylor, kummer_taylor, asymptotic, polynomial, closed_form };

struct EvalInfo {
    int terms = 0;
    double max_term_mag = 0.0;   // cancellation scale of the summation
    double est_rel_error = 0.0;  // a-posteriori estimate
    Method method = Method::taylor;
};

struct CfunResult {
    cx value{0.0, 0.0};
    EvalInfo info;
};

// Principal-branch log Gamma(z). Lanczos approximation for Re z >= 1/2,
// recurrence shift otherwise. Throws pole_error at non-positive integers.
cx log_gamma(cx z);

// Digamma psi(z), by upward recurrence into the Stirling regime.
cx digamma(cx z);

// Kummer 1F1(a, b, z).
CfunResult kummer_m_ex(cx a, cx b, cx z, const SeriesControl& ctl = {});
cx kummer_m(cx a, cx b, cx z, const SeriesControl& ctl = {});

// d/dz 1F1(a, b, z) = (a/b) 1F1(a+1, b+1, z).
CfunResult kummer_m_dz_ex(cx a, cx b, cx z, const SeriesControl& ctl = {});
cx kummer_m_dz(cx a, cx b, cx z, const SeriesControl& ctl = {});

// Tricomi U(a, 2, z) via the logarithmic expansion valid at integer b = 2
// (the generic Gamma-ratio formula has a pole there):
//   U(a,2,z) = 1/(Gamma(a) z)
//            + (a-1)/Gamma(a) * [ (ln z + d0) M(a,2,z) + sum_k t_k Delta_k ],
// principal branch of ln z. Non-positive integer a reduces to a polynomial.
CfunResult tricomi_u_b2_ex(cx a, cx z, const SeriesControl& ctl = {});
cx tricomi_u_b2(cx a, cx z, const SeriesControl& ctl = {});

// d/dz U(a, 2, z). Diverges like log z as z -> 0.
CfunResult tricomi_u_dz_ex(cx a, cx z, const SeriesControl& ctl = {});
cx tricomi_u_dz(cx a, cx z, const SeriesControl& ctl = {});

// Pole-separated evaluation of U(a,2,z) and its derivative:
//   u  = pole + u_reg,            pole  = 1/(Gamma(a) z)
//   du = -pole/z + du_reg
// The wavefunction derivative assembly cancels the pole terms exactly, so
// consumers combine the regular parts with the pole handled symbolically.
struct TricomiParts {
    cx u{0.0, 0.0};
    cx du{0.0, 0.0};
    cx u_reg{0.0, 0.0};
    cx du_reg{0.0, 0.0};
    cx pole_coeff{0.0, 0.0};  // 1/Gamma(a); zero in the polynomial case
    EvalInfo info;
};
TricomiParts tricomi_u2_parts(cx a, cx z, const SeriesControl& ctl = {});

}  // namespace coulomb::cfun
