// coulomb-tunnel: transmission and reflection of the 1D Coulomb barrier.
//
// Subcommands: scan, point, oscillations, cutoff, selftest.
// Exit codes: 0 success, 1 computation failure, 2 usage error.

#include <algorithm>
#include <clocale>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coulomb/cfun.hpp"
#include "coulomb/oracle.hpp"
#include "coulomb/scan_io.hpp"
#include "coulomb/scatter.hpp"

namespace {

using namespace coulomb;

double env_eps_floor() {
    if (const char* v = std::getenv("COULOMB_TUNNEL_EPS_FLOOR")) {
        char* end = nullptr;
        double f = std::strtod(v, &end);
        if (end != v && f > 0.0) return f;
        std::cerr << "warning: ignoring malformed COULOMB_TUNNEL_EPS_FLOOR\n";
    }
    return 1e-6;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

struct ScanArgs {
    double u0 = 1.0;
    double emin = 1e-3;
    double emax = 100.0;
    int points = 1000;
    std::string grid = "log";
    std::string format = "csv";
    std::string out;
    std::string svg;
    int jobs = 1;
};

int run_scan(const ScanArgs& a) {
    scatter::EnergyGrid grid;
    grid.emin = a.emin;
    grid.emax = a.emax;
    grid.points = a.points;
    grid.spacing = (a.grid == "log") ? scatter::EnergyGrid::Spacing::log
                                     : scatter::EnergyGrid::Spacing::linear;
    grid.validate();

    scatter::ScanOptions opt;
    opt.jobs = a.jobs;
    opt.eps_floor = env_eps_floor();
    std::vector<scatter::ScanRow> rows = scatter::scan(a.u0, grid, opt);

    std::ofstream file;
    std::ostream& os = open_out(file, a.out);
    if (a.format == "json")
        io::write_scan_json(os, a.u0, rows);
    else
        io::write_scan_csv(os, rows);
    if (!a.svg.empty()) {
        std::ofstream svg(a.svg);
        io::write_scan_svg(svg, rows, grid.spacing == scatter::EnergyGrid::Spacing::log);
    }
    for (const auto& r : rows)
        if (!r.ok()) return 1;
    return 0;
}

int run_point(double epsilon, double u0, const std::string& format, const std::string& out) {
    scatter::TunnelResult r = scatter::transmission(PhysParams(epsilon, u0));
    std::ofstream file;
    std::ostream& os = open_out(file, out);
    if (format == "csv")
        io::write_point_csv(os, r, r.table);
    else
        io::write_point_json(os, r, r.table);
    return r.diag.consistency_failure ? 1 : 0;
}

int run_oscillations(double u0, double lo, double hi, int points) {
    if (!(lo < hi)) throw domain_error("oscillations: window-lo must be below window-hi");
    scatter::EnergyGrid grid{lo, hi, points, scatter::EnergyGrid::Spacing::log};
    scatter::ScanOptions opt;
    opt.eps_floor = env_eps_floor();
    std::vector<scatter::ScanRow> rows = scatter::scan(u0, grid, opt);

    std::cout << "window_lo,window_hi,maxima,min_gap_samples,under_resolved\n";
    double wlo = lo;
    bool any_warning = false;
    while (wlo < hi) {
        double whi = std::min(hi, std::pow(10.0, std::floor(std::log10(wlo) + 1e-12) + 1.0));
        if (whi <= wlo) whi = hi;
        scatter::CensusResult c = scatter::oscillation_census(rows, wlo, whi);
        any_warning = any_warning || c.under_resolved;
        std::cout << io::fmt17(wlo) << "," << io::fmt17(whi) << "," << c.count << ","
                  << c.min_gap_samples << "," << (c.under_resolved ? "true" : "false") << "\n";
        wlo = whi;
    }
    if (any_warning)
        std::cerr << "warning: some windows are under-resolved; increase --points\n";
    for (const auto& r : rows)
        if (!r.ok()) return 1;
    return 0;
}

int run_cutoff(double epsilon, double u0, const std::vector<double>& deltas,
               const std::string& shape, double z_span, double step) {
    std::cout << "delta,T,R,flux_defect,steps,status\n";
    bool all_ok = true;
    for (double d : deltas) {
        oracle::CutoffSpec cut = oracle::CutoffSpec::recommended(epsilon, u0, d);
        if (shape == "ramp") cut.shape = oracle::CutoffSpec::Shape::linear_ramp;
        if (z_span > 0.0) cut.z_span = z_span;
        if (step > 0.0) cut.step = step;
        try {
            oracle::CutoffResult r = oracle::integrate_cutoff(epsilon, u0, cut);
            std::cout << io::fmt17(d) << "," << io::fmt17(r.T) << "," << io::fmt17(r.R) << ","
                      << io::fmt17(r.flux_defect) << "," << r.steps << ",ok\n";
        } catch (const coulomb::error& e) {
            all_ok = false;
            std::string msg = e.what();
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::cout << io::fmt17(d) << ",nan,nan,nan,0,error:" << msg << "\n";
        }
    }
    return all_ok ? 0 : 1;
}

struct SelfCheck {
    std::string name;
    double worst = 0.0;
    double tol = 0.0;
    bool pass() const { return worst <= tol; }
};

int run_selftest(double tol_override) {
    std::vector<SelfCheck> checks;
    auto tolerance = [&](double builtin) { return tol_override > 0.0 ? tol_override : builtin; };
    std::mt19937_64 rng(20240915);

    {  // log gamma recurrence: exp(lg(z+1) - lg(z)) = z
        SelfCheck c{"log_gamma_recurrence", 0.0, tolerance(1e-12)};
        std::uniform_real_distribution<double> ur(-4.0, 8.0), ui(-20.0, 20.0);
        for (int i = 0; i < 64; ++i) {
            cx z(ur(rng), ui(rng));
            if (std::abs(z.imag()) < 0.05) z += cx(0.0, 0.1);
            cx ratio = std::exp(cfun::log_gamma(z + 1.0) - cfun::log_gamma(z));
            c.worst = std::max(c.worst, std::abs(ratio - z) / std::abs(z));
        }
        checks.push_back(c);
    }
    {  // Kummer transformation M(a,b,z) = e^z M(b-a,b,-z)
        SelfCheck c{"kummer_transformation", 0.0, tolerance(1e-10)};
        std::uniform_real_distribution<double> u5(-5.0, 5.0), uz(-14.0, 14.0);
        for (int i = 0; i < 32; ++i) {
            cx a(u5(rng), u5(rng));
            cx b(i % 2 ? 2.0 : 3.0, 0.0);
            cx z(uz(rng), uz(rng));
            cx lhs = cfun::kummer_m(a, b, z);
            cx rhs = std::exp(z) * cfun::kummer_m(b - a, b, -z);
            c.worst = std::max(c.worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-30));
        }
        checks.push_back(c);
    }
    {  // ODE residual of M and U via analytic derivative operations
        SelfCheck c{"cfun_ode_residual", 0.0, tolerance(1e-8)};
        const cx pts[][2] = {{{1.0, -0.5}, {0.0, 2.0}},
                             {{1.0, -3.0}, {0.0, 0.7}},
                             {{1.0, -0.1}, {0.0, 12.0}}};
        for (const auto& pt : pts) {
            cx a = pt[0], z = pt[1], b(2.0, 0.0);
            cx m = cfun::kummer_m(a, b, z);
            cx m1 = cfun::kummer_m_dz(a, b, z);
            cx m2 = (a / b) * ((a + 1.0) / (b + 1.0)) * cfun::kummer_m(a + 2.0, b + 2.0, z);
            cx resid = z * m2 + (b - z) * m1 - a * m;
            double scale = std::abs(z * m2) + std::abs(a * m) + 1e-30;
            c.worst = std::max(c.worst, std::abs(resid) / scale);

            cx u = cfun::tricomi_u_b2(a, z);
            cx u1 = cfun::tricomi_u_dz(a, z);
            double h = 1e-4 * std::abs(z);
            cx dz(h, 0.0), dz2(h / 2.0, 0.0);
            cx u2a = (cfun::tricomi_u_dz(a, z + dz) - cfun::tricomi_u_dz(a, z - dz)) / (2.0 * h);
            cx u2b = (cfun::tricomi_u_dz(a, z + dz2) - cfun::tricomi_u_dz(a, z - dz2)) / h;
            cx u2 = (4.0 * u2b - u2a) / 3.0;  // Richardson
            cx uresid = z * u2 + (b - z) * u1 - a * u;
            double uscale = std::abs(z * u2) + std::abs(a * u) + 1e-30;
            c.worst = std::max(c.worst, std::abs(uresid) / uscale);
        }
        checks.push_back(c);
    }
    {  // Wronskian of (psi_r1, psi_r2) independent of z
        SelfCheck c{"wavefield_wronskian", 0.0, tolerance(1e-8)};
        for (PhysParams p : {PhysParams(1.0, 1.0), PhysParams(0.05, 2.0)}) {
            cx w0;
            bool first = true;
            for (double z : {0.3, 1.0, 3.0, 10.0}) {
                auto s1 = wavefield::psi_r1(p, z);
                auto s2 = wavefield::psi_r2(p, z);
                cx w = s1.value * s2.deriv - s1.deriv * s2.value;
                if (first) {
                    w0 = w;
                    first = false;
                } else {
                    c.worst = std::max(c.worst, std::abs(w - w0) / std::abs(w0));
                }
            }
        }
        checks.push_back(c);
    }
    {  // current-table symmetries and z_ref independence
        SelfCheck c{"flux_symmetries", 0.0, tolerance(1e-9)};
        SelfCheck cz{"flux_zref_independence", 0.0, tolerance(1e-8)};
        std::uniform_real_distribution<double> ue(std::log(0.05), std::log(50.0)), uu(0.2, 5.0);
        for (int i = 0; i < 8; ++i) {
            PhysParams p(std::exp(ue(rng)), uu(rng));
            flux::TableOptions topt;
            topt.cross_check = false;
            flux::CurrentTable t = flux::current_table(p, 1.0, topt);
            double scale = std::abs(t.r(1, 2));
            c.worst = std::max({c.worst, std::abs(t.r(1, 1)) / scale,
                                std::abs(t.l(1, 1)) / scale,
                                std::abs(t.l(2, 1) - std::conj(t.l(1, 2))) / scale,
                                std::abs(t.l(1, 2) + t.r(1, 2)) / scale,
                                std::abs(t.l(2, 2) + t.r(2, 2)) / std::abs(t.r(2, 2))});
            flux::CurrentTable t2 = flux::current_table(p, 2.5, topt);
            cz.worst = std::max({cz.worst,
                                 std::abs(t.r(1, 2) - t2.r(1, 2)) / std::abs(t.r(1, 2)),
                                 std::abs(t.r(2, 2) - t2.r(2, 2)) / std::abs(t.r(2, 2))});
        }
        checks.push_back(c);
        checks.push_back(cz);
    }
    {  // unitarity T + R = 1 over a log grid
        SelfCheck c{"unitarity", 0.0, tolerance(1e-9)};
        scatter::EnergyGrid grid{1e-3, 100.0, 40, scatter::EnergyGrid::Spacing::log};
        for (const auto& row : scatter::scan(1.0, grid))
            c.worst = std::max(c.worst, row.flux_imbalance);
        checks.push_back(c);
    }
    {  // fast path vs extended-precision oracle
        SelfCheck c{"oracle_agreement", 0.0, tolerance(1e-11)};
        std::uniform_real_distribution<double> ue(std::log(1e-3), std::log(100.0)), uu(0.2, 5.0),
            uz(std::log(0.1), std::log(3.0));
        for (int i = 0; i < 8; ++i) {
            double eps = std::exp(ue(rng)), u0 = uu(rng), z = std::exp(uz(rng));
            double k = std::sqrt(eps), y = u0 / (2.0 * k), t = 2.0 * k * z;
            cx a(1.0, -y), w(0.0, t);
            oracle::PrecisionSpec prec;
            prec.digits = (t > 18.0 || t * y > 55.0) ? 100 : 50;
            auto m = oracle::ref_kummer_m(a, cx(2.0, 0.0), w, prec);
            c.worst = std::max(c.worst, std::abs(cfun::kummer_m(a, cx(2.0, 0.0), w) - m.value) /
                                            std::abs(m.value));
            auto u = oracle::ref_tricomi_u_b2(a, w, prec);
            c.worst = std::max(c.worst,
                               std::abs(cfun::tricomi_u_b2(a, w) - u.value) / std::abs(u.value));
        }
        checks.push_back(c);
    }

    bool all = true;
    for (const auto& c : checks) {
        all = all && c.pass();
        std::cout << (c.pass() ? "PASS" : "FAIL") << "  " << c.name
                  << "  worst=" << io::fmt17(c.worst) << "  tol=" << io::fmt17(c.tol) << "\n";
    }
    std::cout << (all ? "selftest: all invariants hold\n" : "selftest: FAILURES present\n");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_NUMERIC, "C");
    CLI::App app{"Transmission and reflection coefficients of the one-dimensional Coulomb "
                 "potential barrier (singularity-preserving treatment)"};
    app.require_subcommand(1);

    ScanArgs sa;
    CLI::App* scan = app.add_subcommand("scan", "Sweep T and R over an energy grid");
    scan->add_option("--u0", sa.u0, "Barrier power u0")->check(CLI::PositiveNumber);
    scan->add_option("--emin", sa.emin, "Lowest energy")->check(CLI::PositiveNumber);
    scan->add_option("--emax", sa.emax, "Highest energy")->check(CLI::PositiveNumber);
    scan->add_option("--points", sa.points, "Grid size")->check(CLI::PositiveNumber);
    scan->add_option("--grid", sa.grid, "Grid spacing")->check(CLI::IsMember({"log", "linear"}));
    scan->add_option("--format", sa.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    scan->add_option("--out", sa.out, "Output path (default stdout)");
    scan->add_option("--svg", sa.svg, "Also write a line chart to this path");
    scan->add_option("--jobs", sa.jobs, "Worker threads")->check(CLI::PositiveNumber);

    double pt_eps = 1.0, pt_u0 = 1.0;
    std::string pt_format = "json", pt_out;
    CLI::App* point = app.add_subcommand("point", "Full single-energy evaluation");
    point->add_option("--epsilon", pt_eps, "Energy")->required()->check(CLI::PositiveNumber);
    point->add_option("--u0", pt_u0, "Barrier power u0")->check(CLI::PositiveNumber);
    point->add_option("--format", pt_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    point->add_option("--out", pt_out, "Output path (default stdout)");

    double os_u0 = 1.0, os_lo = 1e-3, os_hi = 1e-1;
    int os_points = 4000;
    CLI::App* osc = app.add_subcommand("oscillations", "Per-decade census of T maxima");
    osc->add_option("--u0", os_u0, "Barrier power u0")->check(CLI::PositiveNumber);
    osc->add_option("--window-lo", os_lo, "Window lower edge")->check(CLI::PositiveNumber);
    osc->add_option("--window-hi", os_hi, "Window upper edge")->check(CLI::PositiveNumber);
    osc->add_option("--points", os_points, "Scan resolution")->check(CLI::PositiveNumber);

    double co_eps = 1.0, co_u0 = 1.0, co_span = 0.0, co_step = 0.0;
    std::vector<double> co_deltas;
    std::string co_shape = "flat";
    CLI::App* cut = app.add_subcommand("cutoff", "Direct integration with a regularized potential");
    cut->add_option("--epsilon", co_eps, "Energy")->check(CLI::PositiveNumber);
    cut->add_option("--u0", co_u0, "Barrier power u0 (0 allowed: free particle)")
        ->check(CLI::NonNegativeNumber);
    cut->add_option("--deltas", co_deltas, "Cutoff half-widths, comma separated")
        ->required()
        ->delimiter(',');
    cut->add_option("--shape", co_shape, "Regularization shape")
        ->check(CLI::IsMember({"flat", "ramp"}));
    cut->add_option("--z-span", co_span, "Override integration half-span");
    cut->add_option("--step", co_step, "Override integrator step");

    double st_tol = 0.0;
    CLI::App* self = app.add_subcommand("selftest", "Run the invariant suite");
    self->add_option("--tol", st_tol, "Override every tolerance (testing hook)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (scan->parsed()) return run_scan(sa);
        if (point->parsed()) return run_point(pt_eps, pt_u0, pt_format, pt_out);
        if (osc->parsed()) return run_oscillations(os_u0, os_lo, os_hi, os_points);
        if (cut->parsed()) return run_cutoff(co_eps, co_u0, co_deltas, co_shape, co_span, co_step);
        if (self->parsed()) return run_selftest(st_tol);
    } catch (const coulomb::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
