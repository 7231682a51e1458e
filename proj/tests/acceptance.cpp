// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "coulomb/cfun.hpp"
#include "coulomb/oracle.hpp"
#include "coulomb/scatter.hpp"
#include "coulomb/wavefield.hpp"

using namespace coulomb;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %s  (%s)\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

// ---- 1. Flux conservation: T + R = 1 within 1e-9 on a 500-point log grid
//         over eps in [1e-3, 1e2] at u0 in {0.3, 1, 3}.
void criterion_unitarity() {
    double worst = 0.0;
    bool all_ok = true;
    scatter::EnergyGrid grid{1e-3, 1e2, 500, scatter::EnergyGrid::Spacing::log};
    for (double u0 : {0.3, 1.0, 3.0}) {
        for (const auto& row : scatter::scan(u0, grid)) {
            all_ok = all_ok && row.ok();
            worst = std::max(worst, row.flux_imbalance);
        }
    }
    report("flux conservation T+R=1 (500-pt log grid, u0 in {0.3,1,3})",
           all_ok && worst < 1e-9, "worst |T+R-1| = " + fmt(worst));
}

struct DecadeCounts {
    int low = 0;   // maxima in [1e-3, 1e-2]
    int high = 0;  // maxima in [1e-2, 1e-1]
    double tmin = 1.0, tmax = 0.0;
};

DecadeCounts figure1_census(double u0) {
    scatter::EnergyGrid grid{1e-3, 1e-1, 4000, scatter::EnergyGrid::Spacing::log};
    auto rows = scatter::scan(u0, grid);
    DecadeCounts out;
    out.low = scatter::oscillation_census(rows, 1e-3, 1e-2).count;
    out.high = scatter::oscillation_census(rows, 1e-2, 1e-1).count;
    for (const auto& r : rows) {
        if (!r.ok()) continue;
        out.tmin = std::min(out.tmin, r.T);
        out.tmax = std::max(out.tmax, r.T);
    }
    return out;
}

// ---- 2. Figure-1 shape: oscillations densify toward eps -> 0 and T swings
//         below 0.1 and above 0.9 within [1e-3, 1e-1] at u0 = 1.
DecadeCounts g_u1;  // shared with criterion 4

void criterion_figure1() {
    g_u1 = figure1_census(1.0);
    bool pass = g_u1.low > g_u1.high && g_u1.tmin < 0.1 && g_u1.tmax > 0.9;
    report("figure-1 shape: census densifies toward eps->0, T spans (0.1, 0.9)", pass,
           "maxima " + std::to_string(g_u1.low) + " vs " + std::to_string(g_u1.high) +
               ", T in [" + fmt(g_u1.tmin) + ", " + fmt(g_u1.tmax) + "]");
}

// ---- 3. Figure-2 shape: no local maxima of T for eps > 5 and T(100) >= 0.95,
//         the threshold confirmed against the extended-precision value.
void criterion_figure2() {
    scatter::EnergyGrid grid{5.0, 100.0, 500, scatter::EnergyGrid::Spacing::log};
    auto rows = scatter::scan(1.0, grid);
    int maxima = scatter::oscillation_census(rows, 5.0, 100.0).count;
    double t100 = scatter::transmission(PhysParams(100.0, 1.0)).T;
    // frozen from the 50-digit oracle evaluation of the closed-form reduction
    const double t100_ref = 0.99917016962048446;
    bool pass = maxima == 0 && t100 >= 0.95 && std::abs(t100 - t100_ref) < 1e-9;
    report("figure-2 shape: monotone transparency for eps > 5, T(100) >= 0.95", pass,
           "maxima = " + std::to_string(maxima) + ", T(100) = " + fmt(t100));
}

// ---- 4. u0 dependence: per-decade counts at u0 = 0.3 do not exceed u0 = 1.
void criterion_u0_dependence() {
    DecadeCounts u03 = figure1_census(0.3);
    bool pass = u03.low <= g_u1.low && u03.high <= g_u1.high;
    report("u0 dependence: weaker barrier oscillates no faster", pass,
           "u0=0.3 counts " + std::to_string(u03.low) + "/" + std::to_string(u03.high) +
               " vs u0=1 " + std::to_string(g_u1.low) + "/" + std::to_string(g_u1.high));
}

// ---- 5. Current-structure identities on 20 randomized parameter points.
void criterion_currents() {
    std::mt19937_64 rng(2027);
    std::uniform_real_distribution<double> ue(std::log(0.05), std::log(50.0)), uu(0.2, 5.0);
    double worst_zero = 0.0, worst_conj = 0.0, worst_anti = 0.0, worst_zref = 0.0;
    flux::TableOptions opt;
    opt.cross_check = false;
    for (int i = 0; i < 20; ++i) {
        PhysParams p(std::exp(ue(rng)), uu(rng));
        flux::CurrentTable t03 = flux::current_table(p, 0.3, opt);
        flux::CurrentTable t1 = flux::current_table(p, 1.0, opt);
        flux::CurrentTable t3 = flux::current_table(p, 3.0, opt);
        double scale = 0.0;
        for (int m = 1; m <= 2; ++m)
            for (int n = 1; n <= 2; ++n)
                scale = std::max({scale, std::abs(t1.l(m, n)), std::abs(t1.r(m, n))});
        worst_zero = std::max({worst_zero, std::abs(t1.l(1, 1)) / scale,
                               std::abs(t1.r(1, 1)) / scale});
        worst_conj = std::max({worst_conj,
                               std::abs(t1.l(2, 1) - std::conj(t1.l(1, 2))) / std::abs(t1.l(1, 2)),
                               std::abs(t1.r(2, 1) - std::conj(t1.r(1, 2))) / std::abs(t1.r(1, 2))});
        worst_anti = std::max({worst_anti,
                               std::abs(t1.l(1, 2) + t1.r(1, 2)) / std::abs(t1.r(1, 2)),
                               std::abs(t1.l(2, 2) + t1.r(2, 2)) / std::abs(t1.r(2, 2))});
        for (const flux::CurrentTable* t : {&t03, &t3})
            for (int m = 1; m <= 2; ++m)
                for (int n = 1; n <= 2; ++n) {
                    if (m == 1 && n == 1) continue;
                    worst_zref = std::max(
                        {worst_zref, std::abs(t->l(m, n) - t1.l(m, n)) / std::abs(t1.l(m, n)),
                         std::abs(t->r(m, n) - t1.r(m, n)) / std::abs(t1.r(m, n))});
                }
    }
    bool pass = worst_zero < 1e-10 && worst_conj < 1e-9 && worst_anti < 1e-9 && worst_zref < 1e-8;
    report("current-structure identities (j11=0, j21=j12*, j_l=-j_r, z_ref-free)", pass,
           "zero " + fmt(worst_zero) + ", conj " + fmt(worst_conj) + ", anti " + fmt(worst_anti) +
               ", zref " + fmt(worst_zref));
}

// ---- 6. Oracle equivalence on 50 scattering-regime samples, plus the
//         Kummer-transformation and ODE-residual suites.
void criterion_oracle() {
    std::mt19937_64 rng(424243);
    std::uniform_real_distribution<double> ue(std::log(1e-3), std::log(100.0)), uu(0.2, 5.0),
        uz(std::log(0.1), std::log(3.0));
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        double eps = std::exp(ue(rng)), u0 = uu(rng), z = std::exp(uz(rng));
        double k = std::sqrt(eps), y = u0 / (2.0 * k), t = 2.0 * k * z;
        cx a(1.0, -y), w(0.0, t);
        oracle::PrecisionSpec prec;
        prec.digits = (t > 18.0 || t * y > 55.0) ? 100 : 50;
        auto m = oracle::ref_kummer_m(a, cx(2, 0), w, prec);
        worst = std::max(worst,
                         std::abs(cfun::kummer_m(a, cx(2, 0), w) - m.value) / std::abs(m.value));
        auto u = oracle::ref_tricomi_u_b2(a, w, prec);
        worst = std::max(worst,
                         std::abs(cfun::tricomi_u_b2(a, w) - u.value) / std::abs(u.value));
    }

    double worst_kt = 0.0;
    std::uniform_real_distribution<double> u5(-5.0, 5.0), uzz(-14.0, 14.0);
    for (int i = 0; i < 64; ++i) {
        cx a(u5(rng), u5(rng)), b(i % 2 ? 2.0 : 3.0, 0.0), z(uzz(rng), uzz(rng));
        cx lhs = cfun::kummer_m(a, b, z);
        cx rhs = std::exp(z) * cfun::kummer_m(b - a, b, -z);
        worst_kt = std::max(worst_kt, std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-30));
    }

    std::vector<double> grid;
    for (double z = 0.1; z <= 20.0; z *= 1.6) grid.push_back(z);
    PhysParams p(1.0, 1.0);
    double worst_ode = std::max(oracle::ode_residual(p, wavefield::Basis::r1, grid),
                                oracle::ode_residual(p, wavefield::Basis::r2, grid));

    bool pass = worst < 1e-11 && worst_kt < 1e-10 && worst_ode < 1e-6;
    report("special-function oracle equivalence + identity suites", pass,
           "oracle " + fmt(worst) + ", kummer-transform " + fmt(worst_kt) + ", ode " +
               fmt(worst_ode));
}

// ---- 7. Cutoff contrast: T_delta strictly decreasing over four decades.
void criterion_cutoff() {
    std::vector<double> ts;
    bool conserved = true;
    for (double d : {1e-1, 1e-2, 1e-3, 1e-4}) {
        oracle::CutoffSpec cut = oracle::CutoffSpec::recommended(1.0, 1.0, d);
        oracle::CutoffResult r = oracle::integrate_cutoff(1.0, 1.0, cut);
        conserved = conserved && r.flux_defect < 1e-6;
        ts.push_back(r.T);
    }
    bool monotone = ts[0] > ts[1] && ts[1] > ts[2] && ts[2] > ts[3];
    report("cutoff regularization: T_delta strictly decreasing over 1e-1..1e-4",
           monotone && conserved,
           "T = " + fmt(ts[0]) + ", " + fmt(ts[1]) + ", " + fmt(ts[2]) + ", " + fmt(ts[3]));
}

// ---- 8. Diagnostics honesty: Im(a_r1) is reported, not forced to zero.
void criterion_diagnostics() {
    scatter::TunnelResult r = scatter::transmission(PhysParams(1.0, 1.0));
    scatter::EnergyGrid grid{0.5, 2.0, 3, scatter::EnergyGrid::Spacing::log};
    auto rows = scatter::scan(1.0, grid);
    bool rows_carry = true;
    for (const auto& row : rows) rows_carry = rows_carry && std::abs(row.im_a_r1) > 0.01;
    bool pass = std::abs(r.diag.im_a_r1) > 0.01 && rows_carry &&
                r.diag.flux_imbalance < 1e-9;
    report("diagnostics honesty: Im(a_r1) surfaced while T+R=1 holds", pass,
           "im_a_r1 = " + fmt(r.diag.im_a_r1));
}

}  // namespace

int main() {
    criterion_unitarity();
    criterion_figure1();
    criterion_figure2();
    criterion_u0_dependence();
    criterion_currents();
    criterion_oracle();
    criterion_cutoff();
    criterion_diagnostics();
    std::printf("%d of 8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
