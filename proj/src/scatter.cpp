#include "coulomb/scatter.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "coulomb/cfun.hpp"

namespace coulomb::scatter {

namespace {

constexpr cx kI{0.0, 1.0};

// Log-represented rho = Re[1/Gamma(1+iy)] (sign carried in the phase).
LogComplex log_rho(cx lg_gamma_1piy) {
    double c = std::cos(lg_gamma_1piy.imag());
    if (std::abs(c) < 1e-12)
        throw degenerate_table_error(
            "continuity: Re[1/Gamma(1+iy)] vanishes at this energy");
    return {-lg_gamma_1piy.real() + std::log(std::abs(c)), c < 0.0 ? kPi : 0.0};
}

}  // namespace

RadiationAmplitude radiation_amplitude(const PhysParams& p) {
    p.validate();
    const double k = p.k();
    const double y = p.y();
    const cx s(-1.0, y);
    // Principal-branch power ratio (i k)^s / (-i k)^s = exp(s * i pi).
    cx log_ratio = s * (std::log(cx(0.0, k)) - std::log(cx(0.0, -k)));
    cx lg = cfun::log_gamma(cx(1.0, y));

    RadiationAmplitude out;
    out.log_value.log_mag = log_ratio.real() + lg.real();
    out.log_value.phase = log_ratio.imag() + lg.imag() + kPi;  // leading minus sign
    if (out.log_value.log_mag < -700.0) {
        out.underflow = true;
        out.value = {0.0, 0.0};
    } else {
        out.value = out.log_value.value();
    }
    return out;
}

cx continuity_amplitude(const PhysParams& p, cx a_r1, cx a_r2,
                        const flux::CurrentTable& table) {
    p.validate();
    cx j_l12 = table.l(1, 2);
    cx j_r12 = table.r(1, 2);
    cx j_r22 = table.r(2, 2);
    if (std::abs(j_l12.real()) < 1e-12 * std::abs(j_l12) ||
        std::abs(j_r12.real()) < 1e-12 * std::abs(j_r12))
        throw degenerate_table_error("continuity_amplitude: Re[j_l12] vanishes");
    return -a_r1 - (j_r22 / j_r12.real()) * a_r2;
}

SolveResult solve_ex(const PhysParams& p, const SolveOptions& opt) {
    p.validate();
    const double y = p.y();
    SolveResult out;
    out.amps.a_r2 = 1.0;
    out.amps.a_l2 = 1.0;

    RadiationAmplitude ar = radiation_amplitude(p);
    out.la_r1 = ar.log_value;
    out.amps.a_r1 = ar.value;
    out.amplitude_underflow = ar.underflow;

    if (y <= kLogRouteY) {
        flux::TableOptions topt;
        topt.cross_check = opt.table_cross_check;
        topt.ctl = opt.ctl;
        flux::CurrentTable table = flux::current_table(p, 1.0, topt);
        cx a_l1 = continuity_amplitude(p, ar.value, cx(1.0, 0.0), table);
        out.amps.a_l1 = a_l1;
        out.la_l1 = LogComplex::from(a_l1);
        out.table_cross_dev = table.cross_check_dev;
        out.table = table;
        return out;
    }

    // Deep-suppression route: the same algebra through log Gamma only.
    // j_r22 / Re[j_r12] = -e^{-pi y} / rho with rho = Re[1/Gamma(1+iy)], so
    // a_l1 = -a_r1 + e^{-pi y} / rho.
    out.used_log_route = true;
    cx lg = cfun::log_gamma(cx(1.0, y));
    LogComplex rho = log_rho(lg);
    LogComplex ratio{-kPi * y - rho.log_mag, -rho.phase};
    out.la_l1 = log_sum({out.la_r1.negated(), ratio});
    out.amps.a_l1 = out.la_l1.value();
    if (out.la_l1.underflows_double() || out.la_r1.underflows_double())
        out.amplitude_underflow = true;
    return out;
}

AmplitudeSet solve(const PhysParams& p) { return solve_ex(p).amps; }

AsymptoticAmplitudes asymptotic_amplitudes_log(const PhysParams& p, LogComplex la_l1,
                                               LogComplex la_l2, LogComplex la_r1) {
    p.validate();
    const double k = p.k();
    const double y = p.y();
    const cx iy(0.0, y);
    const cx log2k_plus = std::log(2.0) + std::log(cx(0.0, k));    // Log 2 + Log(ik)
    const cx log2k_minus = std::log(2.0) + std::log(cx(0.0, -k));  // Log 2 + Log(-ik)
    const cx lg_p = cfun::log_gamma(cx(1.0, y));   // log Gamma(1+iy)
    const cx lg_m = cfun::log_gamma(cx(1.0, -y));  // log Gamma(1-iy)

    auto factor = [](cx exponent) { return LogComplex{exponent.real(), exponent.imag()}; };

    AsymptoticAmplitudes out;

    // c_tr = 2^{-1-iy} (ik)^{-1-iy} / Gamma(1-iy) * a_r1
    out.lc_tr = factor((-1.0 - iy) * log2k_plus - lg_m) * la_r1;

    // c_inc = -[ (ik)^{-1+iy}/Gamma(1+iy) a_l1
    //            + e^{2 i pi (-1+iy)} (-ik)^{-1+iy} a_l2 ] * 2^{-1+iy} * e^{pi y}
    LogComplex t1 = factor((-1.0 + iy) * log2k_plus - lg_p) * la_l1;
    LogComplex t2 = factor(2.0 * kI * kPi * (-1.0 + iy) + (-1.0 + iy) * log2k_minus) * la_l2;
    LogComplex bracket = log_sum({t1, t2});
    out.lc_inc = LogComplex{bracket.log_mag + kPi * y, bracket.phase + kPi};

    // c_refl = -2^{-1-iy} e^{2 pi y} (-ik)^{-1-iy} / Gamma(1-iy) * a_l1 * e^{-pi y}
    out.lc_refl =
        factor((-1.0 - iy) * log2k_minus + cx(kPi * y, kPi) - lg_m) * la_l1;

    out.c_tr = out.lc_tr.value();
    out.c_inc = out.lc_inc.value();
    out.c_refl = out.lc_refl.value();
    return out;
}

AsymptoticAmplitudes asymptotic_amplitudes(const PhysParams& p, const AmplitudeSet& amps) {
    return asymptotic_amplitudes_log(p, LogComplex::from(amps.a_l1),
                                     LogComplex::from(amps.a_l2),
                                     LogComplex::from(amps.a_r1));
}

TunnelResult transmission(const PhysParams& p, const SolveOptions& opt) {
    SolveResult s = solve_ex(p, opt);
    AsymptoticAmplitudes cs =
        asymptotic_amplitudes_log(p, s.la_l1, LogComplex{0.0, 0.0}, s.la_r1);

    TunnelResult out;
    out.epsilon = p.epsilon;
    out.u0 = p.u0;
    out.amps = s.amps;
    out.c_inc = cs.c_inc;
    out.c_tr = cs.c_tr;
    out.c_refl = cs.c_refl;
    out.T = std::exp(2.0 * (cs.lc_tr.log_mag - cs.lc_inc.log_mag));
    out.R = std::exp(2.0 * (cs.lc_refl.log_mag - cs.lc_inc.log_mag));

    out.diag.flux_imbalance = std::abs(out.T + out.R - 1.0);
    out.diag.im_a_r1 = std::sin(s.la_r1.phase);
    out.diag.r_unitarity_discrepancy = std::abs(out.R - (1.0 - out.T));
    out.diag.table_cross_dev = s.table_cross_dev;
    out.diag.log_route = s.used_log_route;
    out.diag.amplitude_underflow = s.amplitude_underflow;
    if (s.table.has_value()) {
        double jl = flux::total_current(s.amps, *s.table, flux::Side::left);
        double jr = flux::total_current(s.amps, *s.table, flux::Side::right);
        out.diag.continuity_residual =
            std::abs(jl - jr) / (std::abs(jl) + std::abs(jr) + 1e-300);
        out.table = std::move(s.table);
    } else {
        out.diag.continuity_residual = out.diag.flux_imbalance;
    }
    out.diag.consistency_failure = out.diag.flux_imbalance > 1e-6;
    return out;
}

void EnergyGrid::validate() const {
    if (!(emin > 0.0)) throw domain_error("EnergyGrid: emin must be > 0");
    if (!(emax >= emin)) throw domain_error("EnergyGrid: emax must be >= emin");
    if (points < 1) throw domain_error("EnergyGrid: points must be >= 1");
    if (points == 1 && emax != emin)
        throw domain_error("EnergyGrid: a one-point grid requires emin == emax");
}

std::vector<double> EnergyGrid::values() const {
    validate();
    std::vector<double> v(static_cast<size_t>(points));
    if (points == 1) {
        v[0] = emin;
        return v;
    }
    if (spacing == Spacing::log) {
        double llo = std::log(emin), lhi = std::log(emax);
        for (int j = 0; j < points; ++j)
            v[static_cast<size_t>(j)] = std::exp(llo + (lhi - llo) * j / (points - 1));
    } else {
        for (int j = 0; j < points; ++j)
            v[static_cast<size_t>(j)] = emin + (emax - emin) * j / (points - 1);
    }
    v.front() = emin;
    v.back() = emax;
    return v;
}

std::vector<ScanRow> scan(double u0, const EnergyGrid& grid, const ScanOptions& opt) {
    return scan(u0, grid.values(), opt);
}

std::vector<ScanRow> scan(double u0, const std::vector<double>& eps, const ScanOptions& opt) {
    std::vector<ScanRow> rows(eps.size());
    const int jobs = std::max(1, opt.jobs);

    auto work = [&](size_t idx) {
        ScanRow& row = rows[idx];
        row.epsilon = eps[idx];
        if (eps[idx] < opt.eps_floor) {
            row.status = "error:eps_below_floor";
            return;
        }
        try {
            TunnelResult r = transmission(PhysParams(eps[idx], u0), opt.solve);
            row.T = r.T;
            row.R = r.R;
            row.flux_imbalance = r.diag.flux_imbalance;
            row.im_a_r1 = r.diag.im_a_r1;
            if (r.diag.consistency_failure)
                row.status = "error:flux_imbalance";
            else if (r.diag.amplitude_underflow)
                row.status = "underflow";
            else
                row.status = "ok";
        } catch (const coulomb::error& e) {
            row.status = std::string("error:") + e.what();
        }
    };

    if (jobs == 1) {
        for (size_t i = 0; i < eps.size(); ++i) work(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(jobs));
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < eps.size(); i = next.fetch_add(1)) work(i);
            });
        for (auto& th : pool) th.join();
    }
    return rows;
}

CensusResult oscillation_census(const std::vector<ScanRow>& rows, double lo, double hi) {
    std::vector<double> t;
    t.reserve(rows.size());
    for (const auto& r : rows)
        if (r.epsilon >= lo && r.epsilon <= hi && r.ok()) t.push_back(r.T);

    CensusResult out;
    const size_t n = t.size();
    if (n < 3) return out;

    std::vector<size_t> maxima;
    size_t i = 1;
    while (i + 1 < n) {
        if (t[i] > t[i - 1]) {
            size_t j = i;
            while (j + 1 < n && t[j + 1] == t[j]) ++j;  // plateau
            if (j + 1 < n && t[j + 1] < t[j]) maxima.push_back((i + j) / 2);
            i = j + 1;
        } else {
            ++i;
        }
    }
    out.count = static_cast<int>(maxima.size());
    out.min_gap_samples = static_cast<int>(n);
    for (size_t m = 1; m < maxima.size(); ++m)
        out.min_gap_samples =
            std::min(out.min_gap_samples, static_cast<int>(maxima[m] - maxima[m - 1]));
    out.under_resolved = maxima.size() >= 2 && out.min_gap_samples < 4;
    return out;
}

}  // namespace coulomb::scatter
