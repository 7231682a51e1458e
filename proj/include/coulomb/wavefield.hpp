#pragma once

// Basis solutions of psi'' + (eps - u0/|z|) psi = 0 on each side of the
// singular point, and their derivatives. Right side (z > 0):
//   psi_r1 = e^{-i k z} z 1F1(1 - i u0/(2k), 2, 2 i k z)   (regular, real)
//   psi_r2 = e^{-i k z} z U (1 - i u0/(2k), 2, 2 i k z)    (irregular; the
//            derivative diverges like log z at the origin)
// Left side (z < 0) by the z -> -z substitution: psi_l,m(z) = psi_r,m(-z).

#include "coulomb/cfun.hpp"
#include "coulomb/types.hpp"

namespace coulomb::wavefield {

// Derivatives of the irregular solutions are refused closer to the origin
// than this; they diverge logarithmically there by construction.
inline constexpr double kSingularGuard = 1e-8;

struct WaveSample {
    double z = 0.0;
    cx value{0.0, 0.0};
    cx deriv{0.0, 0.0};
};

enum class Basis { r1, r2, l1, l2 };

WaveSample psi_r1(const PhysParams& p, double z, const cfun::SeriesControl& ctl = {});
WaveSample psi_r2(const PhysParams& p, double z, const cfun::SeriesControl& ctl = {});
WaveSample psi_l1(const PhysParams& p, double z, const cfun::SeriesControl& ctl = {});
WaveSample psi_l2(const PhysParams& p, double z, const cfun::SeriesControl& ctl = {});

WaveSample psi_basis(const PhysParams& p, Basis which, double z,
                     const cfun::SeriesControl& ctl = {});

// General solution a_{r,1} psi_r1 + a_{r,2} psi_r2 (z > 0) or the l-side
// counterpart (z < 0); linear in the amplitudes.
WaveSample psi_general(const PhysParams& p, const AmplitudeSet& amps, double z,
                       const cfun::SeriesControl& ctl = {});

}  // namespace coulomb::wavefield
