#include "coulomb/cfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coulomb/detail/dd.hpp"
#include "coulomb/detail/ddmath.hpp"

namespace coulomb::cfun {

using detail::dd;
using detail::ddc;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_nonpositive_integer(cx z, double tol = 1e-13) {
    if (std::abs(z.imag()) > tol) return false;
    double r = std::round(z.real());
    return r <= 0.0 && std::abs(z.real() - r) <= tol * std::max(1.0, std::abs(r));
}

int nonpositive_integer_value(cx z) { return static_cast<int>(std::round(-z.real())); }

// Lanczos coefficients, g = 607/128, n = 15 (Godfrey's set).
constexpr double kLanczosG = 607.0 / 128.0;
constexpr double kLanczos[15] = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5};

cx log_gamma_halfplane(cx z) {  // requires Re z >= 1/2
    cx sum(kLanczos[0], 0.0);
    for (int k = 1; k < 15; ++k) sum += kLanczos[k] / (z - 1.0 + static_cast<double>(k));
    cx t = z + (kLanczosG - 0.5);
    return 0.5 * std::log(2.0 * kPi) + (z - 0.5) * std::log(t) - t + std::log(sum);
}

// Bernoulli numbers B_2..B_14 for the digamma tail.
constexpr double kB2n[7] = {1.0 / 6.0,   -1.0 / 30.0, 1.0 / 42.0,   -1.0 / 30.0,
                            5.0 / 66.0,  -691.0 / 2730.0, 7.0 / 6.0};

struct TaylorOut {
    ddc sum;   // sum t_k
    ddc dsum;  // sum k t_k
    double max_term = 0.0;
    double last_term = 0.0;
    int terms = 0;
    bool converged = false;
};

TaylorOut taylor_loop(cx a, cx b, cx z, const SeriesControl& ctl) {
    TaylorOut out;
    ddc t(1.0, 0.0);
    ddc zc(z);
    ddc ac(a);
    ddc bc(b);
    out.sum = ddc(1.0, 0.0);
    out.max_term = 1.0;

    const double past_peak =
        std::max({std::abs(z), std::sqrt(std::abs(a) * std::abs(z)), 4.0});
    int small_streak = 0;

    for (int k = 1; k <= ctl.max_terms; ++k) {
        ddc num = (ac + ddc(static_cast<double>(k - 1), 0.0)) * zc;
        ddc den = (bc + ddc(static_cast<double>(k - 1), 0.0)) * dd(static_cast<double>(k));
        t = t * num / den;
        out.sum = out.sum + t;
        out.dsum = out.dsum + t * dd(static_cast<double>(k));
        double tm = t.abs_estimate();
        out.max_term = std::max(out.max_term, tm);
        out.last_term = tm;
        out.terms = k;

        if (k > past_peak &&
            tm <= 0.05 * ctl.tol * std::max(out.sum.abs_estimate(), 1e-290)) {
            if (++small_streak >= 2) {
                out.converged = true;
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    return out;
}

struct U2SeriesOut {
    // U  = pref * value_bracket        with value_bracket  = 1/(z(a-1)) + B
    // U' = (pref/z) * deriv_bracket    with deriv_bracket  = -1/(z(a-1)) + BD
    // B  = sum t_k (L + Delta_k),  BD = sum t_k (1 + k (L + Delta_k)),
    // Delta_k the rational part of d_k - d_0 (recurrence below), L = ln z + d0.
    ddc value_bracket, deriv_bracket;
    ddc reg_bracket, dreg_bracket;  // B and BD alone (pole-separated parts)
    double max_term = 0.0;
    double last_term = 0.0;
    int terms = 0;
    bool converged = false;
};

// Logarithmic-case series of U(a,2,z), accumulated directly against the full
// assembly so both the pole/regular split and the bracket cancellation are
// inside the compensated sums. The termination test measures increments
// against the cancelled targets, not the raw series scale.
//   Delta_0 = 0,  Delta_k = Delta_{k-1} + 1/(a+k-1) - 1/k - 1/(k+1)
// (equals d_k - d_0 for d_k = psi(a+k) - psi(1+k) - psi(2+k); b = 2 only).
U2SeriesOut taylor_u2_loop(cx a, cx z, const SeriesControl& ctl, ddc big_l, ddc pole_seed) {
    U2SeriesOut out;
    ddc t(1.0, 0.0);
    ddc zc(z);
    ddc ac(a);
    ddc delta(0.0, 0.0);
    out.reg_bracket = big_l;        // k = 0 term: t_0 (L + Delta_0) = L
    out.dreg_bracket = ddc(1.0, 0.0);  // k = 0 term of BD
    out.max_term = 1.0 + big_l.abs_estimate();

    const double past_peak =
        std::max({std::abs(z), std::sqrt(std::abs(a) * std::abs(z)), 4.0});
    int small_streak = 0;

    for (int k = 1; k <= ctl.max_terms; ++k) {
        ddc num = (ac + ddc(static_cast<double>(k - 1), 0.0)) * zc;
        dd den = detail::two_prod(2.0 + (k - 1), static_cast<double>(k));
        t = t * num / den;
        delta = delta + detail::recip(ac + ddc(static_cast<double>(k - 1), 0.0));
        delta.re = delta.re - detail::recip(dd(static_cast<double>(k)));
        delta.re = delta.re - detail::recip(dd(static_cast<double>(k + 1)));

        ddc bterm = t * (big_l + delta);
        out.reg_bracket = out.reg_bracket + bterm;
        out.dreg_bracket = out.dreg_bracket + t + bterm * dd(static_cast<double>(k));

        double bmag = bterm.abs_estimate();
        double dmag = t.abs_estimate() + bmag * k;
        out.max_term = std::max({out.max_term, bmag, dmag});
        out.last_term = std::max(bmag, dmag);
        out.terms = k;

        double vscale =
            std::max((pole_seed + out.reg_bracket).abs_estimate(), 1e-290);
        double dscale =
            std::max((out.dreg_bracket - pole_seed).abs_estimate(), 1e-290);
        if (k > past_peak && bmag <= 0.05 * ctl.tol * vscale &&
            dmag <= 0.05 * ctl.tol * dscale) {
            if (++small_streak >= 2) {
                out.converged = true;
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    out.value_bracket = pole_seed + out.reg_bracket;
    out.deriv_bracket = out.dreg_bracket - pole_seed;
    return out;
}

double taylor_error_estimate(const TaylorOut& t, double result_mag) {
    double scale = std::max(result_mag, 1e-290);
    double cancel = t.max_term / scale * detail::kDdEps * std::sqrt(static_cast<double>(t.terms) + 1.0);
    double tail = 2.0 * t.last_term / scale;
    return cancel + tail + 2.0 * kEps;
}

struct Asym2F0 {
    cx sum{1.0, 0.0};
    double est = 1.0;
    int terms = 0;
};

// 2F0(alpha, beta;; w) summed to its smallest term (asymptotic sense).
Asym2F0 asym_2f0(cx alpha, cx beta, cx w, double target) {
    Asym2F0 out;
    cx t(1.0, 0.0);
    cx best_sum = out.sum;
    double best_term = 1.0;
    int best_n = 0;
    cx sum = out.sum;
    const int nmax = 400;
    for (int n = 0; n < nmax; ++n) {
        cx tn = t * (alpha + static_cast<double>(n)) * (beta + static_cast<double>(n)) * w /
                static_cast<double>(n + 1);
        double mag = std::abs(tn);
        if (mag > std::abs(t) && n > 0) break;  // past the smallest term
        t = tn;
        sum += t;
        if (mag < best_term) {
            best_term = mag;
            best_sum = sum;
            best_n = n + 1;
        }
        if (mag <= target * std::max(std::abs(sum), 1e-290)) {
            best_sum = sum;
            best_term = mag;
            best_n = n + 1;
            break;
        }
    }
    out.sum = best_sum;
    out.est = best_term / std::max(std::abs(best_sum), 1e-290);
    out.terms = best_n;
    return out;
}

CfunResult taylor_m(cx a, cx b, cx z, const SeriesControl& ctl) {
    TaylorOut t = taylor_loop(a, b, z, ctl);
    CfunResult r;
    r.value = t.sum.to_complex();
    r.info.terms = t.terms;
    r.info.max_term_mag = t.max_term;
    r.info.method = Method::taylor;
    r.info.est_rel_error = taylor_error_estimate(t, std::abs(r.value));
    if (!t.converged)
        throw convergence_error("kummer_m: series did not terminate within max_terms",
                                std::abs(r.value), r.info.est_rel_error);
    return r;
}

// Two-sector large-z expansion of M(a,b,z) (sector sign from Im z).
CfunResult asym_m(cx a, cx b, cx z, const SeriesControl& ctl) {
    const double sigma = (z.imag() >= 0.0) ? 1.0 : -1.0;
    const cx i_pi(0.0, kPi);
    cx logz = std::log(z);

    Asym2F0 f1 = asym_2f0(a, a - b + 1.0, -1.0 / z, 0.1 * ctl.tol);
    Asym2F0 f2 = asym_2f0(b - a, 1.0 - a, 1.0 / z, 0.1 * ctl.tol);

    cx e1 = std::exp(sigma * i_pi * a - a * logz - log_gamma(b - a)) * f1.sum;
    cx e2 = std::exp(z + (a - b) * logz - log_gamma(a)) * f2.sum;
    cx gb = std::exp(log_gamma(b));

    CfunResult r;
    r.value = gb * (e1 + e2);
    r.info.terms = f1.terms + f2.terms;
    r.info.method = Method::asymptotic;
    double scale = std::max(std::abs(r.value), 1e-290);
    r.info.max_term_mag = std::abs(gb) * (std::abs(e1) + std::abs(e2));
    r.info.est_rel_error = (std::abs(e1) * f1.est + std::abs(e2) * f2.est) * std::abs(gb) / scale +
                           kEps * r.info.max_term_mag / scale + 2.0 * kEps;
    return r;
}

// U(a,b,z) ~ z^{-a} 2F0(a, a-b+1;; -1/z) for large |z|, |arg z| < 3pi/2.
CfunResult asym_u(cx a, cx b, cx z, const SeriesControl& ctl) {
    Asym2F0 f = asym_2f0(a, a - b + 1.0, -1.0 / z, 0.1 * ctl.tol);
    CfunResult r;
    r.value = std::exp(-a * std::log(z)) * f.sum;
    r.info.terms = f.terms;
    r.info.method = Method::asymptotic;
    r.info.max_term_mag = std::abs(r.value);
    r.info.est_rel_error = f.est + 2.0 * kEps;
    return r;
}

// U(-m, 2, z) is a polynomial: (-1)^m sum_k C(m,k) (2+k)_{m-k} (-z)^k.
TricomiParts polynomial_u(int m, cx z) {
    TricomiParts out;
    double sign = (m % 2 == 0) ? 1.0 : -1.0;
    cx u(0.0, 0.0), du(0.0, 0.0);
    double binom = 1.0;
    for (int k = 0; k <= m; ++k) {
        double poch = 1.0;  // (2+k)_{m-k}
        for (int j = 0; j < m - k; ++j) poch *= (2.0 + k + j);
        cx zk = std::pow(-z, static_cast<double>(k));
        u += binom * poch * zk;
        if (k >= 1) du += binom * poch * (-static_cast<double>(k)) * std::pow(-z, static_cast<double>(k - 1));
        binom *= static_cast<double>(m - k) / static_cast<double>(k + 1);
    }
    out.u = sign * u;
    out.du = sign * du;
    out.u_reg = out.u;
    out.du_reg = out.du;
    out.pole_coeff = cx(0.0, 0.0);  // 1/Gamma(-m) = 0
    out.info.method = Method::polynomial;
    out.info.est_rel_error = 8.0 * kEps * (m + 1);
    return out;
}

// At a = 1 the logarithmic series carries a vanishing prefactor 1/Gamma(0)
// and U(1,2,z) = 1/z exactly; the generic path would divide by a - 1.
TricomiParts unit_a_u2(cx z) {
    TricomiParts out;
    out.pole_coeff = cx(1.0, 0.0);
    out.u = 1.0 / z;
    out.du = -1.0 / (z * z);
    out.u_reg = cx(0.0, 0.0);
    out.du_reg = cx(0.0, 0.0);
    out.info.method = Method::closed_form;
    out.info.est_rel_error = 4.0 * kEps;
    return out;
}

TricomiParts series_u2(cx a, cx z, const SeriesControl& ctl) {
    // The bracket (ln z + d0) M + S1 and the pole/regular split cancel like
    // e^{4 sqrt(|a z|)} for large |Im a| at moderate |z|; everything is
    // accumulated in double-double, prefactors included, so the cancellation
    // eats from ~1e-32, not from double epsilon.
    ddc a_dd(a), z_dd(z);
    ddc big_l = detail::ddc_log(z_dd) + detail::dd_digamma(a_dd);
    big_l.re = big_l.re + detail::kDdTwoEulerMinus1;
    ddc inv_ga = detail::ddc_exp(-detail::dd_log_gamma(a_dd));
    ddc pref = (a_dd - ddc(1.0, 0.0)) * inv_ga;  // 1/Gamma(a-1)
    ddc pole_seed = detail::recip(z_dd * (a_dd - ddc(1.0, 0.0)));  // pole/pref

    U2SeriesOut s = taylor_u2_loop(a, z, ctl, big_l, pole_seed);

    TricomiParts out;
    out.u = (pref * s.value_bracket).to_complex();
    out.du = ((pref * s.deriv_bracket) / z_dd).to_complex();
    out.u_reg = (pref * s.reg_bracket).to_complex();
    out.du_reg = ((pref * s.dreg_bracket) / z_dd).to_complex();
    out.pole_coeff = inv_ga.to_complex();
    out.info.terms = s.terms;
    out.info.method = Method::taylor;
    out.info.max_term_mag = s.max_term * std::max(1.0, pref.abs_estimate());

    double vb = std::max(s.value_bracket.abs_estimate(), 1e-290);
    double noise = s.max_term * detail::kDdEps * std::sqrt(s.terms + 1.0) +
                   detail::kDdEps * pole_seed.abs_estimate();
    out.info.est_rel_error =
        (noise + 2.0 * s.last_term) / vb + 8.0 * detail::kDdEps + 2.0 * kEps;
    if (!s.converged)
        throw convergence_error("tricomi_u_b2: series did not terminate within max_terms",
                                std::abs(out.u), out.info.est_rel_error);
    return out;
}

TricomiParts asym_u2_parts(cx a, cx z, const SeriesControl& ctl) {
    CfunResult u = asym_u(a, cx(2.0, 0.0), z, ctl);
    CfunResult du_shift = asym_u(a + 1.0, cx(3.0, 0.0), z, ctl);
    TricomiParts out;
    out.u = u.value;
    out.du = -a * du_shift.value;
    out.pole_coeff = std::exp(-log_gamma(a));
    cx pole = out.pole_coeff / z;
    out.u_reg = out.u - pole;
    out.du_reg = out.du + pole / z;
    out.info = u.info;
    out.info.est_rel_error = std::max(u.info.est_rel_error, du_shift.info.est_rel_error);
    return out;
}

}  // namespace

cx log_gamma(cx z) {
    if (is_nonpositive_integer(z))
        throw pole_error("log_gamma: pole at non-positive integer");
    if (z.real() >= 0.5) return log_gamma_halfplane(z);
    // Recurrence shift: log Gamma(z) = log Gamma(z+m) - sum log(z+j).
    int m = static_cast<int>(std::ceil(0.5 - z.real()));
    cx shift(0.0, 0.0);
    for (int j = 0; j < m; ++j) shift += std::log(z + static_cast<double>(j));
    return log_gamma_halfplane(z + static_cast<double>(m)) - shift;
}

cx digamma(cx z) {
    if (is_nonpositive_integer(z))
        throw pole_error("digamma: pole at non-positive integer");
    cx acc(0.0, 0.0);
    cx w = z;
    while (w.real() < 15.0) {
        acc -= 1.0 / w;
        w += 1.0;
    }
    cx inv2 = 1.0 / (w * w);
    cx tail(0.0, 0.0);
    cx p = inv2;
    for (int n = 0; n < 7; ++n) {
        tail += kB2n[n] / (2.0 * (n + 1.0)) * p;
        p *= inv2;
    }
    return acc + std::log(w) - 0.5 / w - tail;
}

CfunResult kummer_m_ex(cx a, cx b, cx z, const SeriesControl& ctl) {
    ctl.validate();
    if (is_nonpositive_integer(b))
        throw pole_error("kummer_m: b must not be a non-positive integer");
    if (z == cx(0.0, 0.0)) {
        CfunResult r;
        r.value = cx(1.0, 0.0);
        r.info.method = Method::closed_form;
        return r;
    }
    if (z.real() < 0.0) {
        // Kummer transformation: M(a,b,z) = e^z M(b-a, b, -z).
        CfunResult inner = kummer_m_ex(b - a, b, -z, ctl);
        inner.value *= std::exp(z);
        inner.info.method = Method::kummer_taylor;
        inner.info.est_rel_error += 2.0 * kEps;
        return inner;
    }
    if (std::abs(z) <= ctl.asymptotic_switch) return taylor_m(a, b, z, ctl);

    CfunResult asym = asym_m(a, b, z, ctl);
    if (asym.info.est_rel_error <= std::max(ctl.tol, 1e-13)) return asym;

    CfunResult tay = taylor_m(a, b, z, ctl);
    CfunResult& best = (tay.info.est_rel_error <= asym.info.est_rel_error) ? tay : asym;
    if (best.info.est_rel_error > 1e-6)
        throw convergence_error("kummer_m: no evaluation route reaches tolerance",
                                std::abs(best.value), best.info.est_rel_error);
    return best;
}

cx kummer_m(cx a, cx b, cx z, const SeriesControl& ctl) { return kummer_m_ex(a, b, z, ctl).value; }

CfunResult kummer_m_dz_ex(cx a, cx b, cx z, const SeriesControl& ctl) {
    CfunResult r = kummer_m_ex(a + 1.0, b + 1.0, z, ctl);
    r.value *= a / b;
    return r;
}

cx kummer_m_dz(cx a, cx b, cx z, const SeriesControl& ctl) {
    return kummer_m_dz_ex(a, b, z, ctl).value;
}

TricomiParts tricomi_u2_parts(cx a, cx z, const SeriesControl& ctl) {
    ctl.validate();
    if (z == cx(0.0, 0.0)) throw domain_error("tricomi_u_b2: z must be nonzero");
    if (is_nonpositive_integer(a)) return polynomial_u(nonpositive_integer_value(a), z);
    if (std::abs(a - 1.0) < 1e-250) return unit_a_u2(z);
    if (std::abs(z) <= ctl.asymptotic_switch) {
        TricomiParts ser = series_u2(a, z, ctl);
        if (ser.info.est_rel_error > 1e-6)
            throw convergence_error(
                "tricomi_u_b2: assembly cancellation exceeds double precision "
                "(large |Im a| at moderate |z|)",
                std::abs(ser.u), ser.info.est_rel_error);
        return ser;
    }

    TricomiParts asym = asym_u2_parts(a, z, ctl);
    if (asym.info.est_rel_error <= std::max(ctl.tol, 1e-13)) return asym;

    TricomiParts ser = series_u2(a, z, ctl);
    TricomiParts& best = (ser.info.est_rel_error <= asym.info.est_rel_error) ? ser : asym;
    if (best.info.est_rel_error > 1e-6)
        throw convergence_error("tricomi_u_b2: no evaluation route reaches tolerance",
                                std::abs(best.u), best.info.est_rel_error);
    return best;
}

CfunResult tricomi_u_b2_ex(cx a, cx z, const SeriesControl& ctl) {
    TricomiParts p = tricomi_u2_parts(a, z, ctl);
    return {p.u, p.info};
}

cx tricomi_u_b2(cx a, cx z, const SeriesControl& ctl) { return tricomi_u_b2_ex(a, z, ctl).value; }

CfunResult tricomi_u_dz_ex(cx a, cx z, const SeriesControl& ctl) {
    TricomiParts p = tricomi_u2_parts(a, z, ctl);
    return {p.du, p.info};
}

cx tricomi_u_dz(cx a, cx z, const SeriesControl& ctl) { return tricomi_u_dz_ex(a, z, ctl).value; }

}  // namespace coulomb::cfun
