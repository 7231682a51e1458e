#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "coulomb/cfun.hpp"
#include "coulomb/flux.hpp"
#include "coulomb/scatter.hpp"

using namespace coulomb;
using wavefield::WaveSample;

TEST_CASE("bilinear of a real sample with itself vanishes") {
    WaveSample s{1.3, cx(0.7, 0.0), cx(-0.2, 0.0)};
    CHECK(flux::bilinear(s, s) == cx(0.0, 0.0));
}

TEST_CASE("bilinear of a plane wave is 2 kappa k") {
    double k = 1.7, z = 0.4;
    cx i(0, 1);
    WaveSample s{z, std::exp(i * k * z), i * k * std::exp(i * k * z)};
    cx j = flux::bilinear(s, s);
    CHECK(std::abs(j - cx(2.0 * kKappa * k, 0.0)) < 1e-14);
}

TEST_CASE("bilinear requires samples at the same coordinate") {
    WaveSample a{1.0, cx(1, 0), cx(0, 1)};
    WaveSample b{2.0, cx(1, 0), cx(0, 1)};
    CHECK_THROWS_AS(flux::bilinear(a, b), domain_error);
}

TEST_CASE("basis bilinear is the same at z = 1 and z = 2") {
    PhysParams p(1.0, 1.0);
    auto at = [&](double z) {
        return flux::bilinear(wavefield::psi_r1(p, z), wavefield::psi_r2(p, z));
    };
    cx j1 = at(1.0), j2 = at(2.0);
    CHECK(std::abs(j1 - j2) / std::abs(j1) < 1e-9);
}

TEST_CASE("current_table verifies the symmetry structure") {
    PhysParams p(1.0, 1.0);
    flux::CurrentTable t = flux::current_table(p);
    double scale = std::abs(t.r(1, 2));
    CHECK(std::abs(t.r(1, 1)) < 1e-10 * scale);
    CHECK(std::abs(t.l(1, 1)) < 1e-10 * scale);
    CHECK(std::abs(t.l(2, 1) - std::conj(t.l(1, 2))) < 1e-9 * scale);
    CHECK(std::abs(t.r(2, 1) - std::conj(t.r(1, 2))) < 1e-9 * scale);
    CHECK(std::abs(t.l(1, 2) + t.r(1, 2)) < 1e-9 * scale);
    CHECK(std::abs(t.l(2, 2) + t.r(2, 2)) < 1e-9 * std::abs(t.r(2, 2)));
    CHECK(t.cross_check_dev < 1e-9);
    CHECK(t.z_ref == 1.0);
}

TEST_CASE("current_table closed forms: j_r12 = kappa/(2k Gamma(1+iy)), j_r22 = -kappa e^{-pi y}/(2k)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ue(std::log(0.05), std::log(50.0)), uu(0.2, 5.0);
    for (int i = 0; i < 12; ++i) {
        PhysParams p(std::exp(ue(rng)), uu(rng));
        flux::TableOptions opt;
        opt.cross_check = false;
        flux::CurrentTable t = flux::current_table(p, 1.0, opt);
        double k = p.k(), y = p.y();
        cx j12 = kKappa / (2.0 * k * std::exp(cfun::log_gamma(cx(1.0, y))));
        double j22 = -kKappa * std::exp(-kPi * y) / (2.0 * k);
        CHECK(std::abs(t.r(1, 2) - j12) / std::abs(j12) < 1e-12);
        CHECK(std::abs(t.r(2, 2) - j22) / std::abs(j22) < 1e-12);
    }
}

TEST_CASE("raw conjugate-pair j22 agrees with the connection route at tame y") {
    // the raw route loses ~e^{2 pi y} digits, so compare where it is sound
    for (PhysParams p : {PhysParams(4.0, 1.0), PhysParams(1.0, 0.5), PhysParams(9.0, 3.0)}) {
        WaveSample r2 = wavefield::psi_r2(p, 1.0);
        cx raw = flux::bilinear(r2, r2);
        flux::TableOptions opt;
        opt.cross_check = false;
        flux::CurrentTable t = flux::current_table(p, 1.0, opt);
        CHECK(std::abs(raw - t.r(2, 2)) / std::abs(t.r(2, 2)) < 1e-9);
    }
}

TEST_CASE("z_ref independence over randomized parameters") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ue(std::log(0.05), std::log(50.0)), uu(0.2, 5.0);
    flux::TableOptions opt;
    opt.cross_check = false;
    for (int i = 0; i < 20; ++i) {
        PhysParams p(std::exp(ue(rng)), uu(rng));
        flux::CurrentTable a = flux::current_table(p, 0.3, opt);
        flux::CurrentTable b = flux::current_table(p, 1.0, opt);
        flux::CurrentTable c = flux::current_table(p, 3.0, opt);
        for (const flux::CurrentTable* t : {&b, &c}) {
            CHECK(std::abs(a.r(1, 2) - t->r(1, 2)) / std::abs(a.r(1, 2)) < 1e-8);
            CHECK(std::abs(a.r(2, 1) - t->r(2, 1)) / std::abs(a.r(2, 1)) < 1e-8);
            CHECK(std::abs(a.r(2, 2) - t->r(2, 2)) / std::abs(a.r(2, 2)) < 1e-8);
            CHECK(std::abs(a.l(1, 2) - t->l(1, 2)) / std::abs(a.l(1, 2)) < 1e-8);
        }
    }
}

TEST_CASE("current_table rejects z_ref outside [0.1, 10]") {
    PhysParams p(1.0, 1.0);
    CHECK_THROWS_AS(flux::current_table(p, 0.05), domain_error);
    CHECK_THROWS_AS(flux::current_table(p, 11.0), domain_error);
}

TEST_CASE("total_current: regular-only amplitudes carry no current") {
    PhysParams p(1.0, 1.0);
    flux::CurrentTable t = flux::current_table(p);
    AmplitudeSet amps;
    amps.a_r1 = cx(0.8, -0.3);
    amps.a_l1 = cx(-0.1, 0.6);
    CHECK(std::abs(flux::total_current(amps, t, flux::Side::right)) < 1e-12);
    CHECK(std::abs(flux::total_current(amps, t, flux::Side::left)) < 1e-12);
    AmplitudeSet zero;
    CHECK(flux::total_current(zero, t, flux::Side::left) == 0.0);
}

TEST_CASE("total_current is real for random complex amplitudes") {
    PhysParams p(2.0, 0.8);
    flux::CurrentTable t = flux::current_table(p);
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        AmplitudeSet amps;
        amps.a_l1 = cx(u(rng), u(rng));
        amps.a_l2 = cx(u(rng), u(rng));
        amps.a_r1 = cx(u(rng), u(rng));
        amps.a_r2 = cx(u(rng), u(rng));
        // throws if the Hermitian form produced a non-real current
        (void)flux::total_current(amps, t, flux::Side::left);
        (void)flux::total_current(amps, t, flux::Side::right);
    }
}

TEST_CASE("solved amplitudes balance left and right currents") {
    for (PhysParams p : {PhysParams(1.0, 1.0), PhysParams(0.02, 0.7), PhysParams(40.0, 2.0)}) {
        scatter::SolveResult s = scatter::solve_ex(p);
        REQUIRE(s.table.has_value());
        double jl = flux::total_current(s.amps, *s.table, flux::Side::left);
        double jr = flux::total_current(s.amps, *s.table, flux::Side::right);
        CHECK(std::abs(jl - jr) / (std::abs(jl) + std::abs(jr)) < 1e-9);
    }
}
