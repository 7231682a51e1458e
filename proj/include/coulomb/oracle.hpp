#pragma once

// Independent verification machinery:
//  - arbitrary-precision reference evaluators for the special functions
//    (pure series summation, no regime switching, wide floats), used to
//    certify the fast path;
//  - a direct fixed-step integrator of the Schrodinger equation with a
//    cutoff-regularized potential, reproducing the impenetrable-in-the-limit
//    behaviour the singularity-preserving treatment is contrasted against;
//  - a finite-difference ODE-residual check for the wavefield basis solutions.

#include <vector>

#include "coulomb/types.hpp"
#include "coulomb/wavefield.hpp"

namespace coulomb::oracle {

struct PrecisionSpec {
    int digits = 50;          // working decimal precision, 30..100
    long max_terms = 200000;  // series cap
    double target_rel = 1e-12;  // error bounds beyond this raise precision_error

    void validate() const {
        if (digits < 30) throw domain_error("PrecisionSpec: digits must be >= 30");
        if (digits > 100) throw domain_error("PrecisionSpec: digits above 100 not supported");
        if (max_terms < 10) throw domain_error("PrecisionSpec: max_terms must be >= 10");
    }
};

struct RefValue {
    cx value{0.0, 0.0};
    double rel_error_bound = 0.0;  // first neglected term + cancellation budget
};

// Term-by-term extended-precision summation of the defining series (Kummer
// transformation applied for Re z < 0).
RefValue ref_kummer_m(cx a, cx b, cx z, const PrecisionSpec& prec = {});

// Extended-precision b = 2 logarithmic-case expansion.
RefValue ref_tricomi_u_b2(cx a, cx z, const PrecisionSpec& prec = {});

// Extended-precision principal-branch log Gamma (Stirling + recurrence).
RefValue ref_log_gamma(cx z, const PrecisionSpec& prec = {});

struct CutoffSpec {
    enum class Shape { flat_top, linear_ramp, square_barrier };

    double delta = 1e-2;   // cutoff half-width
    double z_span = 30.0;  // integrate over [-z_span, z_span]
    double step = 1e-3;    // RK4 step
    Shape shape = Shape::flat_top;

    void validate(double epsilon) const;
    // Step/span defaults satisfying the validity bounds for these parameters.
    static CutoffSpec recommended(double epsilon, double u0, double delta);
};

struct CutoffResult {
    double T = 0.0;
    double R = 0.0;
    double flux_defect = 0.0;  // integrator self-consistency, should be < 1e-6
    long steps = 0;
};

// Integrate psi'' = (V - eps) psi from +Z leftward with a pure outgoing wave
// seeded at +Z, V the cutoff-regularized potential, and extract T from the
// plane-wave decomposition at -Z. u0 = 0 (free particle) is allowed.
CutoffResult integrate_cutoff(double epsilon, double u0, const CutoffSpec& cut);

// Worst relative residual of psi'' + (eps - u0/|z|) psi = 0 over the grid,
// second derivative by central differences of step h.
double ode_residual(const PhysParams& p, wavefield::Basis which,
                    const std::vector<double>& z_grid, double h = 1e-4);

}  // namespace coulomb::oracle
