#pragma once

// Probability-current bilinears j_{l,mn}, j_{r,mn} of the basis solutions and
// the total currents of general amplitude sets. The bilinears are
// Wronskian-type combinations of same-energy solutions of a real ODE, hence
// independent of the coordinate they are sampled at; the table verifies this
// plus the symmetry relations j_11 = 0, j_21 = conj(j_12), j_l,mn = -j_r,mn.

#include <array>

#include "coulomb/types.hpp"
#include "coulomb/wavefield.hpp"

namespace coulomb::flux {

struct CurrentTable {
    // Entries indexed 1-based as in j_{l,mn}: jl(1,2) etc.
    std::array<std::array<cx, 2>, 2> jl{};
    std::array<std::array<cx, 2>, 2> jr{};
    double z_ref = 1.0;
    double cross_check_dev = 0.0;  // worst relative deviation across z_ref samples
    bool j22_underflowed = false;  // e^{-pi y} prefactor below double range

    cx l(int m, int n) const { return jl[m - 1][n - 1]; }
    cx r(int m, int n) const { return jr[m - 1][n - 1]; }
};

// Pointwise current bilinear i*kappa*(psi_m psi_n*' - psi_m' psi_n*), both
// samples taken at the same coordinate.
cx bilinear(const wavefield::WaveSample& m, const wavefield::WaveSample& n,
            double kappa = kKappa);

struct TableOptions {
    bool cross_check = true;        // re-sample at z_ref/2 and 2*z_ref
    bool verify_invariants = true;  // throw invariant_violation on failure
    cfun::SeriesControl ctl{};
};

// Populate all eight bilinears from basis-solution samples at +/- z_ref.
// j_12, j_21, j_11 come from raw sample pairs. j_22's raw conjugate pairing
// cancels like e^{2 pi y} and is instead evaluated through the
// conjugate-solution connection  psi_2* = -e^{-pi y} Gamma(1-iy) psi_1 + beta psi_2,
// giving j_22 = i kappa e^{-pi y} Gamma(1-iy) W[psi_1, psi_2] with the
// Wronskian sampled at z_ref (cancellation-free at any y).
CurrentTable current_table(const PhysParams& p, double z_ref = 1.0,
                           const TableOptions& opt = {});

enum class Side { left, right };

// Quadratic form of the current in the basis amplitudes: the physical current carried by the
// general solution with the given amplitudes on one side.
double total_current(const AmplitudeSet& amps, const CurrentTable& table, Side side);

}  // namespace coulomb::flux
