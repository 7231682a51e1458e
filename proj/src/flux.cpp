#include "coulomb/flux.hpp"

#include <algorithm>
#include <cmath>

#include "coulomb/cfun.hpp"

namespace coulomb::flux {

namespace {

constexpr cx kI{0.0, 1.0};

cx connection_j22(const PhysParams& p, const wavefield::WaveSample& s1,
                  const wavefield::WaveSample& s2, bool& underflowed) {
    const double y = p.y();
    cx lg = cfun::log_gamma(cx(1.0, -y));
    double log_mag = -kPi * y + lg.real();
    if (log_mag < -700.0) {
        underflowed = true;
        return {0.0, 0.0};
    }
    cx prefactor = std::polar(std::exp(log_mag), lg.imag());
    cx wronskian = s1.value * s2.deriv - s1.deriv * s2.value;
    return kI * kKappa * prefactor * wronskian;
}

CurrentTable build_table(const PhysParams& p, double z_ref, const TableOptions& opt) {
    wavefield::WaveSample r1 = wavefield::psi_r1(p, z_ref, opt.ctl);
    wavefield::WaveSample r2 = wavefield::psi_r2(p, z_ref, opt.ctl);
    wavefield::WaveSample l1 = wavefield::psi_l1(p, -z_ref, opt.ctl);
    wavefield::WaveSample l2 = wavefield::psi_l2(p, -z_ref, opt.ctl);

    CurrentTable t;
    t.z_ref = z_ref;
    t.jr[0][0] = bilinear(r1, r1);
    t.jr[0][1] = bilinear(r1, r2);
    t.jr[1][0] = bilinear(r2, r1);
    t.jl[0][0] = bilinear(l1, l1);
    t.jl[0][1] = bilinear(l1, l2);
    t.jl[1][0] = bilinear(l2, l1);
    t.jr[1][1] = connection_j22(p, r1, r2, t.j22_underflowed);
    t.jl[1][1] = connection_j22(p, l1, l2, t.j22_underflowed);
    return t;
}

double table_scale(const CurrentTable& t) {
    double s = 0.0;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
            s = std::max({s, std::abs(t.jl[m][n]), std::abs(t.jr[m][n])});
    return s;
}

void verify(const CurrentTable& t) {
    const double scale = table_scale(t);
    double worst = 0.0;
    auto check = [&](double dev, double tol) {
        worst = std::max(worst, dev / tol);
    };
    check(std::abs(t.r(1, 1)) / scale, 1e-10);
    check(std::abs(t.l(1, 1)) / scale, 1e-10);
    check(std::abs(t.l(2, 1) - std::conj(t.l(1, 2))) / std::abs(t.l(1, 2)), 1e-9);
    check(std::abs(t.r(2, 1) - std::conj(t.r(1, 2))) / std::abs(t.r(1, 2)), 1e-9);
    check(std::abs(t.l(1, 2) + t.r(1, 2)) / std::abs(t.r(1, 2)), 1e-9);
    if (!t.j22_underflowed)
        check(std::abs(t.l(2, 2) + t.r(2, 2)) / std::max(std::abs(t.r(2, 2)), 1e-300), 1e-9);
    if (worst > 1.0)
        throw invariant_violation("current_table: symmetry relations violated", worst);
}

double relative_table_dev(const CurrentTable& a, const CurrentTable& b) {
    double worst = 0.0;
    for (int m = 1; m <= 2; ++m)
        for (int n = 1; n <= 2; ++n) {
            if (m == 1 && n == 1) continue;  // zero entries compared against scale elsewhere
            if (m == 2 && n == 2 && a.j22_underflowed) continue;
            worst = std::max(worst, std::abs(a.l(m, n) - b.l(m, n)) / std::abs(a.l(m, n)));
            worst = std::max(worst, std::abs(a.r(m, n) - b.r(m, n)) / std::abs(a.r(m, n)));
        }
    return worst;
}

}  // namespace

cx bilinear(const wavefield::WaveSample& m, const wavefield::WaveSample& n, double kappa) {
    if (m.z != n.z) throw domain_error("bilinear: samples taken at different coordinates");
    return kI * kappa * (m.value * std::conj(n.deriv) - m.deriv * std::conj(n.value));
}

CurrentTable current_table(const PhysParams& p, double z_ref, const TableOptions& opt) {
    p.validate();
    if (!(z_ref >= 0.1 && z_ref <= 10.0))
        throw domain_error("current_table: z_ref must lie in [0.1, 10]");

    CurrentTable t = build_table(p, z_ref, opt);
    if (opt.cross_check) {
        TableOptions inner = opt;
        inner.cross_check = false;
        inner.verify_invariants = false;
        double lo = std::max(0.1, 0.5 * z_ref);
        double hi = std::min(10.0, 2.0 * z_ref);
        t.cross_check_dev = std::max(relative_table_dev(t, build_table(p, lo, inner)),
                                     relative_table_dev(t, build_table(p, hi, inner)));
    }
    if (opt.verify_invariants) verify(t);
    return t;
}

double total_current(const AmplitudeSet& amps, const CurrentTable& table, Side side) {
    cx a1 = (side == Side::left) ? amps.a_l1 : amps.a_r1;
    cx a2 = (side == Side::left) ? amps.a_l2 : amps.a_r2;
    const auto& j = (side == Side::left) ? table.jl : table.jr;
    cx total = std::norm(a1) * j[0][0] + std::conj(a2) * a1 * j[0][1] +
               std::conj(a1) * a2 * j[1][0] + std::norm(a2) * j[1][1];
    double scale = table_scale(table) * (std::norm(a1) + std::norm(a2)) + 1e-300;
    if (std::abs(total.imag()) > 1e-10 * (std::abs(total.real()) + scale))
        throw error("total_current: quadratic form produced a non-real current");
    return total.real();
}

}  // namespace coulomb::flux
