#include "coulomb/wavefield.hpp"

#include <cmath>

#include "coulomb/detail/dd.hpp"

namespace coulomb::wavefield {

namespace {

void require_positive(double z, const char* who) {
    if (!(z > 0.0)) throw domain_error(std::string(who) + ": requires z > 0");
}

}  // namespace

WaveSample psi_r1(const PhysParams& p, double z, const cfun::SeriesControl& ctl) {
    require_positive(z, "psi_r1");
    p.validate();
    const double k = p.k();
    const cx a = p.hyp_a();
    const cx i(0.0, 1.0);
    const cx w = 2.0 * i * k * z;

    cfun::CfunResult m = cfun::kummer_m_ex(a, cx(2.0, 0.0), w, ctl);
    cx md = (a / 2.0) * cfun::kummer_m(a + 1.0, cx(3.0, 0.0), w, ctl);
    cx phase = std::exp(-i * k * z);

    cx value = phase * z * m.value;
    cx deriv = phase * ((1.0 - i * k * z) * m.value + 2.0 * i * k * z * md);

    // psi_r1 is real (Kummer transformation maps it to its own conjugate).
    // Take the real part when the imaginary residue sits inside the noise
    // band, fail loudly otherwise. The absolute floor follows the evaluator's
    // own error estimate, which stays meaningful near zeros of the function.
    double m_abs_err = std::abs(m.value) * m.info.est_rel_error +
                       m.info.max_term_mag * detail::kDdEps;
    double floor = 10.0 * z * m_abs_err;
    if (std::abs(value.imag()) > 1e-10 * std::abs(value) + floor)
        throw error("psi_r1: imaginary residue exceeds the reality tolerance");
    double dfloor = 10.0 * (1.0 + k * z) * (m_abs_err + std::abs(md) * 1e-14);
    if (std::abs(deriv.imag()) > 1e-10 * std::abs(deriv) + dfloor)
        throw error("psi_r1: derivative imaginary residue exceeds the reality tolerance");

    return {z, cx(value.real(), 0.0), cx(deriv.real(), 0.0)};
}

WaveSample psi_r2(const PhysParams& p, double z, const cfun::SeriesControl& ctl) {
    require_positive(z, "psi_r2");
    p.validate();
    if (z < kSingularGuard)
        throw near_singularity_error(
            "psi_r2: inside the singular guard band; the derivative diverges like log z");
    const double k = p.k();
    const cx a = p.hyp_a();
    const cx i(0.0, 1.0);
    const cx w = 2.0 * i * k * z;

    cfun::TricomiParts u = cfun::tricomi_u2_parts(a, w, ctl);
    cx phase = std::exp(-i * k * z);

    // z * (pole/w) = pole_coeff/(2ik) and the derivative's pole pieces sum to
    // -pole_coeff/2; both are used in closed form so no 1/z cancellation is
    // left in the assembly.
    cx pole_over_w_times_z = u.pole_coeff / (2.0 * i * k);
    cx value = phase * (pole_over_w_times_z + z * u.u_reg);
    cx deriv =
        phase * (-0.5 * u.pole_coeff + (1.0 - i * k * z) * u.u_reg + 2.0 * i * k * z * u.du_reg);

    return {z, value, deriv};
}

WaveSample psi_l1(const PhysParams& p, double z, const cfun::SeriesControl& ctl) {
    if (!(z < 0.0)) throw domain_error("psi_l1: requires z < 0");
    WaveSample m = psi_r1(p, -z, ctl);
    return {z, m.value, -m.deriv};
}

WaveSample psi_l2(const PhysParams& p, double z, const cfun::SeriesControl& ctl) {
    if (!(z < 0.0)) throw domain_error("psi_l2: requires z < 0");
    WaveSample m = psi_r2(p, -z, ctl);
    return {z, m.value, -m.deriv};
}

WaveSample psi_basis(const PhysParams& p, Basis which, double z, const cfun::SeriesControl& ctl) {
    switch (which) {
        case Basis::r1: return psi_r1(p, z, ctl);
        case Basis::r2: return psi_r2(p, z, ctl);
        case Basis::l1: return psi_l1(p, z, ctl);
        case Basis::l2: return psi_l2(p, z, ctl);
    }
    throw domain_error("psi_basis: unknown basis selector");
}

WaveSample psi_general(const PhysParams& p, const AmplitudeSet& amps, double z,
                       const cfun::SeriesControl& ctl) {
    if (z == 0.0) throw domain_error("psi_general: undefined at the singular point z = 0");
    WaveSample s;
    s.z = z;
    if (z > 0.0) {
        WaveSample b1 = psi_r1(p, z, ctl);
        WaveSample b2 = psi_r2(p, z, ctl);
        s.value = amps.a_r1 * b1.value + amps.a_r2 * b2.value;
        s.deriv = amps.a_r1 * b1.deriv + amps.a_r2 * b2.deriv;
    } else {
        WaveSample b1 = psi_l1(p, z, ctl);
        WaveSample b2 = psi_l2(p, z, ctl);
        s.value = amps.a_l1 * b1.value + amps.a_l2 * b2.value;
        s.deriv = amps.a_l1 * b1.deriv + amps.a_l2 * b2.deriv;
    }
    return s;
}

}  // namespace coulomb::wavefield
