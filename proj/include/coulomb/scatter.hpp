#pragma once

// Scattering amplitudes via the irregular-coefficient matching (a_l2 = a_r2),
// the radiation condition, and probability-current continuity; asymptotic
// incident/transmitted/reflected amplitudes; T and R; energy scans.

#include <optional>
#include <string>
#include <vector>

#include "coulomb/flux.hpp"
#include "coulomb/types.hpp"

namespace coulomb::scatter {

// Above this value of y = u0/(2 sqrt(eps)) the amplitude algebra runs in
// log-magnitude arithmetic: a_l1 scales like e^{-3 pi y / 2} and intermediate
// factors like e^{2 pi y}, which leave double range long before T does.
inline constexpr double kLogRouteY = 120.0;

struct RadiationAmplitude {
    cx value{0.0, 0.0};  // zero when the magnitude underflows double range
    LogComplex log_value;
    bool underflow = false;
};

// a_r1 for a_r2 = 1 from the no-wave-from-the-right condition:
//   a_r1 = -[(i k)^{-1+iy} / (-i k)^{-1+iy}] Gamma(1+iy),
// principal branch everywhere; |a_r1| = e^{-pi y} |Gamma(1+iy)|.
RadiationAmplitude radiation_amplitude(const PhysParams& p);

// a_l1 from current continuity j_l = j_r with a_l2 = a_r2:
//   a_l1 = -a_r1 - (j_r22 / Re[j_r12]) a_r2.
// Throws degenerate_table_error when Re[j_l12] vanishes (exceptional energy).
cx continuity_amplitude(const PhysParams& p, cx a_r1, cx a_r2,
                        const flux::CurrentTable& table);

struct SolveOptions {
    bool table_cross_check = true;
    cfun::SeriesControl ctl{};
};

struct SolveResult {
    AmplitudeSet amps;  // a_r2 = a_l2 = 1; zeros carry underflow flags below
    LogComplex la_l1, la_r1;
    bool used_log_route = false;
    bool amplitude_underflow = false;
    double table_cross_dev = 0.0;
    std::optional<flux::CurrentTable> table;  // absent on the log route
};

SolveResult solve_ex(const PhysParams& p, const SolveOptions& opt = {});
AmplitudeSet solve(const PhysParams& p);

struct AsymptoticAmplitudes {
    cx c_inc{0.0, 0.0}, c_tr{0.0, 0.0}, c_refl{0.0, 0.0};
    LogComplex lc_inc, lc_tr, lc_refl;
};

// Prefactors of e^{+ i k z} (incident, z -> -inf), e^{+ i k z} (transmitted,
// z -> +inf) and e^{- i k z} (reflected, z -> -inf), with the unit-modulus
// Coulomb log-phases |z|^{-+ iy} stripped. The (1/z)^{-+ iy} factors of the
// z < 0 waves carry moduli e^{+- pi y} on the principal branch (arg z = pi);
// those moduli are folded in here, which is what makes |c|^2 ratios currents.
// Exponents are accumulated in log space before exponentiation.
AsymptoticAmplitudes asymptotic_amplitudes(const PhysParams& p, const AmplitudeSet& amps);
AsymptoticAmplitudes asymptotic_amplitudes_log(const PhysParams& p, LogComplex la_l1,
                                               LogComplex la_l2, LogComplex la_r1);

struct Diagnostics {
    double flux_imbalance = 0.0;       // |T + R - 1|
    double im_a_r1 = 0.0;              // Im(a_r1)/|a_r1|, reported, never forced to 0
    double r_unitarity_discrepancy = 0.0;  // |R - (1 - T)|
    double continuity_residual = 0.0;  // |j_l - j_r| / (|j_l| + |j_r|)
    double table_cross_dev = 0.0;
    bool log_route = false;
    bool amplitude_underflow = false;
    bool consistency_failure = false;  // flux_imbalance > 1e-6
};

struct TunnelResult {
    double epsilon = 0.0;
    double u0 = 0.0;
    double T = 0.0;
    double R = 0.0;
    cx c_inc{0.0, 0.0}, c_tr{0.0, 0.0}, c_refl{0.0, 0.0};
    AmplitudeSet amps;
    Diagnostics diag;
    std::optional<flux::CurrentTable> table;  // absent on the log route
};

TunnelResult transmission(const PhysParams& p, const SolveOptions& opt = {});

struct ScanRow {
    double epsilon = 0.0;
    double T = 0.0;
    double R = 0.0;
    double flux_imbalance = 0.0;
    double im_a_r1 = 0.0;
    std::string status = "ok";  // "ok" | "underflow" | "error:<message>"

    bool ok() const { return status == "ok"; }
};

struct EnergyGrid {
    enum class Spacing { log, linear };
    double emin = 1e-3;
    double emax = 100.0;
    int points = 1000;
    Spacing spacing = Spacing::log;

    void validate() const;
    std::vector<double> values() const;
};

struct ScanOptions {
    int jobs = 1;
    double eps_floor = 1e-6;  // rows below this report an error status
    SolveOptions solve{};
};

// One row per grid energy, in grid order; per-row failures are recorded in
// the row's status and the scan continues.
std::vector<ScanRow> scan(double u0, const EnergyGrid& grid, const ScanOptions& opt = {});
std::vector<ScanRow> scan(double u0, const std::vector<double>& energies,
                          const ScanOptions& opt = {});

struct CensusResult {
    int count = 0;              // strict interior local maxima of T in the window
    int min_gap_samples = 0;    // smallest sample distance between adjacent maxima
    bool under_resolved = false;  // some gap < 4 samples
};

// Count interior local maxima of T for rows with epsilon inside [lo, hi].
// Plateaus of equal T count once, at the plateau midpoint.
CensusResult oscillation_census(const std::vector<ScanRow>& rows, double lo, double hi);

}  // namespace coulomb::scatter
