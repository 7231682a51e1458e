#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "coulomb/oracle.hpp"
#include "coulomb/scatter.hpp"

using namespace coulomb;

namespace {

// Independent algebraic reduction of the whole pipeline: T = cos^2(arg
// Gamma(1 + i u0/(2 sqrt(eps)))), with the argument taken from the
// extended-precision oracle. Used as a cross-check only.
double closed_form_T(const PhysParams& p) {
    double th = oracle::ref_log_gamma(cx(1.0, p.y())).value.imag();
    double c = std::cos(th);
    return c * c;
}

// Energy at which Re[1/Gamma(1+iy)] = 0 (first zero, arg Gamma = pi/2):
// the exceptional point where the continuity equation degenerates.
double degenerate_y() {
    double lo = 3.0, hi = 4.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double th = cfun::log_gamma(cx(1.0, mid)).imag();
        (th < kPi / 2.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("radiation_amplitude magnitude identity") {
    // |a_r1| = e^{-pi y} sqrt(pi y / sinh(pi y)) with y = u0/(2 sqrt(eps))
    for (PhysParams p : {PhysParams(1.0, 1.0), PhysParams(0.3, 2.0), PhysParams(25.0, 0.8)}) {
        double y = p.y();
        scatter::RadiationAmplitude a = scatter::radiation_amplitude(p);
        double want = std::exp(-kPi * y) * std::sqrt(kPi * y / std::sinh(kPi * y));
        CHECK(std::abs(std::abs(a.value) - want) / want < 1e-12);
        CHECK(!a.underflow);
    }
}

TEST_CASE("radiation_amplitude limits") {
    // u0 -> 0: |a_r1| -> 1
    CHECK(std::abs(std::abs(scatter::radiation_amplitude(PhysParams(1.0, 1e-12)).value) - 1.0) <
          1e-10);
    // deep suppression: exponentially small, eventually an underflow-flagged zero
    scatter::RadiationAmplitude tiny = scatter::radiation_amplitude(PhysParams(1e-4, 1.0));
    CHECK(std::abs(tiny.value) < 1e-60);
    CHECK(!tiny.underflow);
    scatter::RadiationAmplitude gone = scatter::radiation_amplitude(PhysParams(9e-6, 1.0));
    CHECK(gone.underflow);
    CHECK(gone.value == cx(0.0, 0.0));
    CHECK(gone.log_value.log_mag < -700.0);  // still carried in log form
}

TEST_CASE("continuity_amplitude degenerate and trivial cases") {
    PhysParams p(1.0, 1.0);
    flux::CurrentTable t = flux::current_table(p);

    // vanishing irregular amplitude: a_l1 = -a_r1
    cx ar1(0.3, -0.8);
    CHECK(scatter::continuity_amplitude(p, ar1, cx(0.0, 0.0), t) == -ar1);

    // vanishing regular amplitude: the current-continuity solution
    cx al1 = scatter::continuity_amplitude(p, cx(0.0, 0.0), cx(1.0, 0.0), t);
    cx want = -(t.r(2, 2) / t.r(1, 2).real());
    CHECK(std::abs(al1 - want) < 1e-14 * std::abs(want));

    // linearity in (a_r1, a_r2)
    cx c(2.0, -3.0);
    cx one = scatter::continuity_amplitude(p, ar1, cx(1.0, 0.0), t);
    cx scaled = scatter::continuity_amplitude(p, c * ar1, c, t);
    CHECK(std::abs(scaled - c * one) < 1e-12 * std::abs(scaled));
}

TEST_CASE("continuity_amplitude reports the exceptional energy") {
    double y = degenerate_y();
    double u0 = 1.0;
    PhysParams p(u0 * u0 / (4.0 * y * y), u0);
    flux::CurrentTable t = flux::current_table(p);
    CHECK_THROWS_AS(scatter::continuity_amplitude(p, cx(0.1, 0.0), cx(1.0, 0.0), t),
                    degenerate_table_error);
}

TEST_CASE("solve produces unit irregular amplitudes and balanced currents") {
    PhysParams p(1.0, 1.0);
    scatter::SolveResult s = scatter::solve_ex(p);
    CHECK(s.amps.a_l2 == cx(1.0, 0.0));
    CHECK(s.amps.a_r2 == cx(1.0, 0.0));
    CHECK(!s.used_log_route);
    REQUIRE(s.table.has_value());
    double jl = flux::total_current(s.amps, *s.table, flux::Side::left);
    double jr = flux::total_current(s.amps, *s.table, flux::Side::right);
    CHECK(std::abs(jl - jr) / (std::abs(jl) + std::abs(jr)) < 1e-9);
}

TEST_CASE("asymptotic amplitudes conserve flux and scale homogeneously") {
    PhysParams p(0.7, 1.3);
    AmplitudeSet amps = scatter::solve(p);
    scatter::AsymptoticAmplitudes cs = scatter::asymptotic_amplitudes(p, amps);
    double T = std::norm(cs.c_tr) / std::norm(cs.c_inc);
    double R = std::norm(cs.c_refl) / std::norm(cs.c_inc);
    CHECK(std::abs(T + R - 1.0) < 1e-9);

    cx c(0.4, 2.1);
    AmplitudeSet scaled = amps;
    scaled.a_l1 *= c;
    scaled.a_l2 *= c;
    scaled.a_r1 *= c;
    scaled.a_r2 *= c;
    scatter::AsymptoticAmplitudes cs2 = scatter::asymptotic_amplitudes(p, scaled);
    CHECK(std::abs(cs2.c_tr - c * cs.c_tr) < 1e-12 * std::abs(cs2.c_tr));
    CHECK(std::abs(cs2.c_inc - c * cs.c_inc) < 1e-12 * std::abs(cs2.c_inc));
    CHECK(std::abs(cs2.c_refl - c * cs.c_refl) < 1e-12 * std::abs(cs2.c_refl));
    double T2 = std::norm(cs2.c_tr) / std::norm(cs2.c_inc);
    CHECK(std::abs(T2 - T) < 1e-12);
}

TEST_CASE("high energy: reflection amplitude is small") {
    PhysParams p(25.0, 1.0);
    AmplitudeSet amps = scatter::solve(p);
    scatter::AsymptoticAmplitudes cs = scatter::asymptotic_amplitudes(p, amps);
    CHECK(std::abs(cs.c_refl) / std::abs(cs.c_inc) < 0.07);
}

TEST_CASE("transmission matches the independent closed-form reduction") {
    for (double u0 : {0.3, 1.0, 3.0}) {
        for (double eps = 1e-3; eps < 150.0; eps *= 4.7) {
            PhysParams p(eps, u0);
            scatter::TunnelResult r = scatter::transmission(p);
            CHECK(std::abs(r.T + r.R - 1.0) < 1e-9);
            CHECK(std::abs(r.T - closed_form_T(p)) < 1e-9);
            CHECK(r.T >= -1e-12);
            CHECK(r.T <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("transmission at eps = 100 approaches unity") {
    scatter::TunnelResult r = scatter::transmission(PhysParams(100.0, 1.0));
    CHECK(r.T >= 0.95);
    CHECK(std::abs(r.T - 1.0) < 0.05);
    // frozen from the extended-precision oracle
    CHECK(std::abs(r.T - 0.99917016962048446) < 1e-9);
}

TEST_CASE("high-energy transparency along decades") {
    // beyond the last oscillation 1 - T shrinks monotonically toward zero
    double gap10 = 1.0 - scatter::transmission(PhysParams(10.0, 1.0)).T;
    double gap100 = 1.0 - scatter::transmission(PhysParams(100.0, 1.0)).T;
    double gap1000 = 1.0 - scatter::transmission(PhysParams(1000.0, 1.0)).T;
    CHECK(gap10 > gap100);
    CHECK(gap100 > gap1000);
    CHECK(gap1000 > 0.0);
    CHECK(gap1000 < 1e-4);
}

TEST_CASE("low-energy T oscillates (not monotone)") {
    double t1 = scatter::transmission(PhysParams(0.1, 1.0)).T;
    double t2 = scatter::transmission(PhysParams(0.01, 1.0)).T;
    double t3 = scatter::transmission(PhysParams(0.001, 1.0)).T;
    bool monotone = (t1 <= t2 && t2 <= t3) || (t1 >= t2 && t2 >= t3);
    CHECK(!monotone);
    for (double t : {t1, t2, t3}) {
        CHECK(t >= 0.0);
        CHECK(t <= 1.0);
    }
}

TEST_CASE("deep-suppression route keeps unitarity") {
    PhysParams p(1e-6, 1.0);  // y = 500
    scatter::TunnelResult r = scatter::transmission(p);
    CHECK(r.diag.log_route);
    CHECK(r.diag.amplitude_underflow);
    CHECK(std::abs(r.T + r.R - 1.0) < 1e-9);
    CHECK(std::abs(r.T - closed_form_T(p)) < 1e-9);
    CHECK(!r.table.has_value());
}

TEST_CASE("reality diagnostic is reported, not suppressed") {
    scatter::TunnelResult r = scatter::transmission(PhysParams(1.0, 1.0));
    // The radiation-condition amplitude carries a complex Gamma factor; the measured
    // imaginary fraction is genuinely nonzero and must be surfaced.
    CHECK(std::abs(r.diag.im_a_r1) > 0.1);
    CHECK(std::abs(r.diag.im_a_r1 - std::sin(std::arg(r.amps.a_r1))) < 1e-12);
}

TEST_CASE("energy grids") {
    scatter::EnergyGrid bad{0.0, 1.0, 10, scatter::EnergyGrid::Spacing::log};
    CHECK_THROWS_AS(bad.validate(), domain_error);
    scatter::EnergyGrid rev{2.0, 1.0, 10, scatter::EnergyGrid::Spacing::log};
    CHECK_THROWS_AS(rev.validate(), domain_error);
    scatter::EnergyGrid single{3.0, 3.0, 1, scatter::EnergyGrid::Spacing::log};
    CHECK(single.values() == std::vector<double>{3.0});
    scatter::EnergyGrid lin{1.0, 2.0, 5, scatter::EnergyGrid::Spacing::linear};
    auto v = lin.values();
    CHECK(v.size() == 5);
    CHECK(v.front() == 1.0);
    CHECK(v.back() == 2.0);
}

TEST_CASE("scan: empty input, single point, row statuses") {
    CHECK(scatter::scan(1.0, std::vector<double>{}).empty());

    // a one-point scan is the composition with transmission
    scatter::EnergyGrid single{1.0, 1.0, 1, scatter::EnergyGrid::Spacing::log};
    auto rows = scatter::scan(1.0, single);
    REQUIRE(rows.size() == 1);
    scatter::TunnelResult direct = scatter::transmission(PhysParams(1.0, 1.0));
    CHECK(rows[0].T == direct.T);
    CHECK(rows[0].R == direct.R);
    CHECK(rows[0].status == "ok");

    // rows below the floor fail in-row, the scan continues
    scatter::ScanOptions opt;
    opt.eps_floor = 0.5;
    auto mixed = scatter::scan(1.0, std::vector<double>{0.1, 1.0}, opt);
    CHECK(mixed[0].status == "error:eps_below_floor");
    CHECK(mixed[1].status == "ok");

    // deep suppression flags underflow but keeps valid T
    opt.eps_floor = 1e-12;
    auto deep = scatter::scan(1.0, std::vector<double>{1e-7}, opt);
    CHECK(deep[0].status == "underflow");
    CHECK(deep[0].flux_imbalance < 1e-6);
    CHECK(deep[0].T >= 0.0);
    CHECK(deep[0].T <= 1.0);
}

TEST_CASE("scan is order-independent under threading") {
    scatter::EnergyGrid grid{1e-2, 10.0, 64, scatter::EnergyGrid::Spacing::log};
    scatter::ScanOptions serial, parallel;
    parallel.jobs = 4;
    auto a = scatter::scan(1.0, grid, serial);
    auto b = scatter::scan(1.0, grid, parallel);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].epsilon == b[i].epsilon);
        CHECK(a[i].T == b[i].T);
        CHECK(a[i].status == b[i].status);
    }
}

TEST_CASE("oscillation_census on synthetic rows") {
    auto mk = [](std::vector<double> ts) {
        std::vector<scatter::ScanRow> rows;
        double e = 1.0;
        for (double t : ts) {
            scatter::ScanRow r;
            r.epsilon = e;
            r.T = t;
            rows.push_back(r);
            e += 1.0;
        }
        return rows;
    };

    // monotone segment: no maxima
    CHECK(scatter::oscillation_census(mk({0.1, 0.2, 0.3, 0.4, 0.5}), 0.0, 10.0).count == 0);

    // two clean interior maxima
    auto two = scatter::oscillation_census(
        mk({0.0, 0.5, 1.0, 0.5, 0.0, 0.0, 0.5, 1.0, 0.5, 0.0}), 0.0, 20.0);
    CHECK(two.count == 2);
    CHECK(two.min_gap_samples == 5);
    CHECK(!two.under_resolved);

    // a plateau counts once
    CHECK(scatter::oscillation_census(mk({0.0, 1.0, 1.0, 1.0, 0.0}), 0.0, 10.0).count == 1);

    // endpoint maxima are not interior
    CHECK(scatter::oscillation_census(mk({1.0, 0.5, 0.2, 0.5, 1.0}), 0.0, 10.0).count == 0);

    // maxima closer than 4 samples raise the under-resolution warning
    auto tight = scatter::oscillation_census(mk({0.0, 1.0, 0.0, 1.0, 0.0}), 0.0, 10.0);
    CHECK(tight.count == 2);
    CHECK(tight.under_resolved);
}

TEST_CASE("oscillation census densifies toward zero energy and is refinement-stable") {
    scatter::EnergyGrid grid{1e-3, 1e-1, 2400, scatter::EnergyGrid::Spacing::log};
    auto rows = scatter::scan(1.0, grid);
    scatter::CensusResult low = scatter::oscillation_census(rows, 1e-3, 1e-2);
    scatter::CensusResult high = scatter::oscillation_census(rows, 1e-2, 1e-1);
    CHECK(low.count > high.count);
    CHECK(!low.under_resolved);

    scatter::EnergyGrid finer{1e-3, 1e-1, 4800, scatter::EnergyGrid::Spacing::log};
    auto rows2 = scatter::scan(1.0, finer);
    CHECK(scatter::oscillation_census(rows2, 1e-3, 1e-2).count == low.count);
    CHECK(scatter::oscillation_census(rows2, 1e-2, 1e-1).count == high.count);
}
