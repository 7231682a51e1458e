#include "coulomb/oracle.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <algorithm>
#include <cmath>

namespace coulomb::oracle {

namespace {

using C50 = boost::multiprecision::cpp_complex_50;
using C100 = boost::multiprecision::cpp_complex_100;

template <class C>
using real_t = typename C::value_type;

template <class C>
C from_cx(cx z) {
    return C(z.real(), z.imag());
}

template <class C>
cx to_cx(const C& z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

template <class C>
double mag(const C& z) {
    return static_cast<double>(abs(z));
}

template <class C>
bool near_nonpositive_integer(const C& z) {
    if (abs(z.imag()) > 1e-30) return false;
    real_t<C> r = round(z.real());
    return r <= 0 && abs(z.real() - r) < 1e-30;
}

// Stirling parameters: shift threshold and Bernoulli term count per digit tier.
template <class C>
constexpr int stirling_shift() {
    return std::numeric_limits<real_t<C>>::digits10 <= 55 ? 30 : 55;
}
template <class C>
constexpr int stirling_terms() {
    return std::numeric_limits<real_t<C>>::digits10 <= 55 ? 40 : 64;
}

template <class C>
C mp_log_gamma(C z) {
    using R = real_t<C>;
    if (near_nonpositive_integer(z)) throw pole_error("ref_log_gamma: pole");
    C shift(0);
    while (z.real() < stirling_shift<C>()) {
        shift += log(z);
        z += 1;
    }
    const R two_pi = 2 * boost::math::constants::pi<R>();
    C acc = (z - C(0.5)) * log(z) - z + C(log(two_pi) / 2);
    C z2 = z * z;
    C zpow = z;
    for (int n = 1; n <= stirling_terms<C>(); ++n) {
        R b = boost::math::bernoulli_b2n<R>(n);
        acc += C(b / (2 * n * (2 * n - 1))) / zpow;
        zpow *= z2;
    }
    return acc - shift;
}

template <class C>
C mp_digamma(C z) {
    using R = real_t<C>;
    if (near_nonpositive_integer(z)) throw pole_error("ref_digamma: pole");
    C acc(0);
    while (z.real() < stirling_shift<C>()) {
        acc -= C(1) / z;
        z += 1;
    }
    C inv2 = C(1) / (z * z);
    C tail(0);
    C p = inv2;
    for (int n = 1; n <= stirling_terms<C>(); ++n) {
        R b = boost::math::bernoulli_b2n<R>(n);
        tail += C(b / (2 * n)) * p;
        p *= inv2;
    }
    return acc + log(z) - C(0.5) / z - tail;
}

template <class C>
struct MpSum {
    C value;
    double max_term;
    double last_term;
    long terms;
    bool converged;
};

template <class C>
MpSum<C> mp_kummer_series(C a, C b, C z, long max_terms, double stop_rel) {
    MpSum<C> out{C(1), 1.0, 1.0, 0, false};
    C t(1);
    const double past_peak = std::max({mag(z), std::sqrt(mag(a) * mag(z)), 4.0});
    int streak = 0;
    for (long k = 1; k <= max_terms; ++k) {
        t *= (a + C(k - 1)) * z / ((b + C(k - 1)) * C(k));
        out.value += t;
        double tm = mag(t);
        out.max_term = std::max(out.max_term, tm);
        out.last_term = tm;
        out.terms = k;
        if (k > past_peak && tm <= stop_rel * std::max(mag(out.value), 1e-290)) {
            if (++streak >= 2) {
                out.converged = true;
                break;
            }
        } else {
            streak = 0;
        }
    }
    return out;
}

template <class C>
RefValue ref_kummer_impl(cx a_, cx b_, cx z_, const PrecisionSpec& prec) {
    using R = real_t<C>;
    const int digits = std::numeric_limits<R>::digits10;
    C a = from_cx<C>(a_), b = from_cx<C>(b_), z = from_cx<C>(z_);
    if (near_nonpositive_integer(b))
        throw pole_error("ref_kummer_m: b must not be a non-positive integer");
    if (z_ == cx(0.0, 0.0)) return {cx(1.0, 0.0), 0.0};

    C factor(1);
    if (z_.real() < 0.0) {  // Kummer transformation
        factor = exp(z);
        a = b - a;
        z = -z;
    }
    MpSum<C> s = mp_kummer_series(a, b, z, prec.max_terms, std::pow(10.0, -(digits - 2)));
    if (!s.converged)
        throw convergence_error("ref_kummer_m: series cap reached", mag(s.value), 1.0);

    C value = factor * s.value;
    double sum_mag = std::max(mag(s.value), 1e-290);
    double bound = s.last_term / sum_mag +
                   s.max_term / sum_mag * std::pow(10.0, -digits) * std::sqrt(double(s.terms));
    if (bound > prec.target_rel)
        throw precision_error("ref_kummer_m: cancellation exceeds the digit budget",
                              std::log10(std::max(s.max_term / sum_mag, 1.0)));
    return {to_cx(value), bound};
}

template <class C>
RefValue ref_tricomi_impl(cx a_, cx z_, const PrecisionSpec& prec) {
    using R = real_t<C>;
    const int digits = std::numeric_limits<R>::digits10;
    if (z_ == cx(0.0, 0.0)) throw domain_error("ref_tricomi_u_b2: z must be nonzero");
    C a = from_cx<C>(a_), z = from_cx<C>(z_);

    if (near_nonpositive_integer(a)) {  // polynomial closed form
        int m = static_cast<int>(-std::lround(a_.real()));
        C u(0);
        R binom(1);
        for (int k = 0; k <= m; ++k) {
            R poch(1);
            for (int j = 0; j < m - k; ++j) poch *= R(2 + k + j);
            u += C(binom * poch) * pow(-z, C(k));
            binom *= R(m - k) / R(k + 1);
        }
        if (m % 2 != 0) u = -u;
        return {to_cx(u), std::pow(10.0, -(digits - 2))};
    }

    const double stop_rel = std::pow(10.0, -(digits - 2));
    C t(1), m_sum(1), s_sum(0), delta(0);
    double max_term = 1.0, last_term = 1.0;
    const double past_peak = std::max({mag(z), std::sqrt(mag(a) * mag(z)), 4.0});
    int streak = 0;
    bool converged = false;
    for (long k = 1; k <= prec.max_terms; ++k) {
        t *= (a + C(k - 1)) * z / ((C(2) + C(k - 1)) * C(k));
        delta += C(1) / (a + C(k - 1)) - C(1) / C(k) - C(1) / C(k + 1);
        m_sum += t;
        s_sum += t * delta;
        double tm = mag(t) * (1.0 + mag(delta));
        max_term = std::max(max_term, tm);
        last_term = tm;
        double scale = std::max({mag(m_sum), mag(s_sum), 1e-290});
        if (k > past_peak && tm <= stop_rel * scale) {
            if (++streak >= 2) {
                converged = true;
                break;
            }
        } else {
            streak = 0;
        }
    }
    if (!converged)
        throw convergence_error("ref_tricomi_u_b2: series cap reached", mag(m_sum), 1.0);

    const R euler = boost::math::constants::euler<R>();
    C d0 = mp_digamma(a) + C(2 * euler - 1);
    C big_l = log(z) + d0;
    C inv_ga = exp(-mp_log_gamma(a));
    C pref = (a - C(1)) * inv_ga;
    C u = inv_ga / z + pref * (big_l * m_sum + s_sum);

    double u_mag = std::max(mag(u), 1e-290);
    double assembly = mag(pref) * (mag(big_l) * mag(m_sum) + mag(s_sum)) + mag(inv_ga / z);
    double bound = (mag(pref) * (1.0 + mag(big_l)) * last_term +
                    (max_term * mag(pref) * (1.0 + mag(big_l)) + assembly) *
                        std::pow(10.0, -digits) * std::sqrt(1000.0)) /
                   u_mag;
    if (bound > prec.target_rel)
        throw precision_error("ref_tricomi_u_b2: cancellation exceeds the digit budget",
                              std::log10(std::max(max_term / u_mag, 1.0)));
    return {to_cx(u), bound};
}

double potential(double z, double epsilon, double u0, const CutoffSpec& cut) {
    (void)epsilon;
    double az = std::abs(z);
    switch (cut.shape) {
        case CutoffSpec::Shape::flat_top:
            return u0 / std::max(az, cut.delta);
        case CutoffSpec::Shape::linear_ramp:
            return az >= cut.delta ? u0 / az : (u0 / cut.delta) * (az / cut.delta);
        case CutoffSpec::Shape::square_barrier:
            return az < cut.delta ? u0 / cut.delta : 0.0;
    }
    return 0.0;
}

}  // namespace

RefValue ref_kummer_m(cx a, cx b, cx z, const PrecisionSpec& prec) {
    prec.validate();
    if (prec.digits <= 50) return ref_kummer_impl<C50>(a, b, z, prec);
    return ref_kummer_impl<C100>(a, b, z, prec);
}

RefValue ref_tricomi_u_b2(cx a, cx z, const PrecisionSpec& prec) {
    prec.validate();
    if (prec.digits <= 50) return ref_tricomi_impl<C50>(a, z, prec);
    return ref_tricomi_impl<C100>(a, z, prec);
}

RefValue ref_log_gamma(cx z, const PrecisionSpec& prec) {
    prec.validate();
    if (prec.digits <= 50)
        return {to_cx(mp_log_gamma(from_cx<C50>(z))), std::pow(10.0, -48)};
    return {to_cx(mp_log_gamma(from_cx<C100>(z))), std::pow(10.0, -98)};
}

void CutoffSpec::validate(double epsilon) const {
    if (!(delta > 0.0)) throw domain_error("CutoffSpec: delta must be > 0");
    if (!(z_span > 10.0 * delta)) throw domain_error("CutoffSpec: z_span must exceed 10*delta");
    if (!(step > 0.0)) throw domain_error("CutoffSpec: step must be > 0");
    if (shape != Shape::square_barrier && !(step < delta / 10.0))
        throw integration_error("CutoffSpec: step must be < delta/10");
    if (!(step < 0.1 / std::sqrt(epsilon)))
        throw integration_error("CutoffSpec: step must be < 0.1/sqrt(epsilon)");
}

CutoffSpec CutoffSpec::recommended(double epsilon, double u0, double delta) {
    CutoffSpec cut;
    cut.delta = delta;
    double k = std::sqrt(epsilon);
    cut.z_span = std::max({25.0, 12.0 / k, 8.0 * u0 / epsilon, 12.0 * delta});
    double local_k = std::sqrt(std::max(u0 / delta + epsilon, 1.0));
    cut.step = std::min({delta / 12.0, 0.08 / k, 0.2 / local_k});
    return cut;
}

CutoffResult integrate_cutoff(double epsilon, double u0, const CutoffSpec& cut) {
    if (!(epsilon > 0.0)) throw domain_error("integrate_cutoff: epsilon must be > 0");
    if (u0 < 0.0) throw domain_error("integrate_cutoff: u0 must be >= 0");
    cut.validate(epsilon);

    const double Z = cut.z_span;
    if (potential(Z, epsilon, u0, cut) >= epsilon)
        throw integration_error("integrate_cutoff: z_span too small, still classically forbidden");
    // Step must resolve the local wavenumber everywhere, including the
    // regularized spike of height ~ u0/delta.
    double worst_k = std::sqrt(std::abs(u0 / std::max(cut.delta, 1e-300) - epsilon) + epsilon);
    if (u0 > 0.0 && cut.step > 0.35 / worst_k)
        throw integration_error("integrate_cutoff: step too coarse for the regularized spike");

    long n = static_cast<long>(std::ceil(2.0 * Z / cut.step));
    const double h = -2.0 * Z / static_cast<double>(n);  // leftward march

    const double k_right = std::sqrt(epsilon - potential(Z, epsilon, u0, cut));
    cx psi(1.0, 0.0);
    cx dpsi = cx(0.0, k_right);

    auto rhs = [&](double z, cx p, cx q, cx& dp, cx& dq) {
        dp = q;
        dq = (potential(z, epsilon, u0, cut) - epsilon) * p;
    };

    double z = Z;
    for (long i = 0; i < n; ++i) {
        cx k1p, k1q, k2p, k2q, k3p, k3q, k4p, k4q;
        rhs(z, psi, dpsi, k1p, k1q);
        rhs(z + 0.5 * h, psi + 0.5 * h * k1p, dpsi + 0.5 * h * k1q, k2p, k2q);
        rhs(z + 0.5 * h, psi + 0.5 * h * k2p, dpsi + 0.5 * h * k2q, k3p, k3q);
        rhs(z + h, psi + h * k3p, dpsi + h * k3q, k4p, k4q);
        psi += (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        dpsi += (h / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        z += h;
    }

    const double k_left = std::sqrt(epsilon - potential(-Z, epsilon, u0, cut));
    const cx ik(0.0, k_left);
    cx c_inc = 0.5 * (psi + dpsi / ik);
    cx c_ref = 0.5 * (psi - dpsi / ik);

    CutoffResult out;
    out.steps = n;
    out.T = k_right / (k_left * std::norm(c_inc));
    out.R = std::norm(c_ref) / std::norm(c_inc);
    out.flux_defect =
        std::abs(k_left * (std::norm(c_inc) - std::norm(c_ref)) - k_right) / k_right;
    if (out.flux_defect > 1e-4)
        throw integration_error("integrate_cutoff: flux conservation lost (step too coarse)");
    return out;
}

double ode_residual(const PhysParams& p, wavefield::Basis which,
                    const std::vector<double>& z_grid, double h) {
    p.validate();
    if (!(h > 0.0)) throw domain_error("ode_residual: h must be > 0");
    double worst = 0.0;
    for (double z : z_grid) {
        if (std::abs(z) <= h + wavefield::kSingularGuard)
            throw domain_error("ode_residual: grid point too close to the singularity");
        cx vm = wavefield::psi_basis(p, which, z - h).value;
        cx v0 = wavefield::psi_basis(p, which, z).value;
        cx vp = wavefield::psi_basis(p, which, z + h).value;
        cx second = (vp - 2.0 * v0 + vm) / (h * h);
        cx resid = second + (p.epsilon - p.u0 / std::abs(z)) * v0;
        double scale = std::abs(second) + p.epsilon * std::abs(v0) + 1e-300;
        worst = std::max(worst, std::abs(resid) / scale);
    }
    return worst;
}

}  // namespace coulomb::oracle
