#pragma once

// Transcendental functions at double-double precision, for the prefactors of
// the U(a,2,z) logarithmic assembly (log z, digamma, log gamma). The assembly
// cancels like e^{4 sqrt(|a z|)} between its pieces; double-rounded prefactors
// cap the achievable accuracy, dd-rounded ones push the cap to ~1e-32 * cancel.
//
// Scope is deliberately narrow: arguments are doubles or dd values in sane
// ranges, Stirling expansions use Bernoulli numbers that are exact double
// fractions (through B34), shifts bring |w| >= 40 where the B36 tail term is
// below 1e-45.

#include <cmath>

#include "coulomb/detail/dd.hpp"

namespace coulomb::detail {

inline constexpr dd kDdLn2{0.6931471805599453, 2.3190468138462996e-17};
inline constexpr dd kDdPi{3.141592653589793, 1.2246467991473532e-16};
inline constexpr dd kDdPiHalf{1.5707963267948966, 6.123233995736766e-17};
inline constexpr dd kDdEuler{0.5772156649015329, -4.942915152430645e-18};
inline constexpr dd kDdHalfLn2Pi{0.9189385332046728, -3.8782941580672414e-17};
inline constexpr dd kDdTwoEulerMinus1{0.15443132980306573, -9.88583030486129e-18};

// B_{2n} for n = 1..17 as exact double fractions.
inline constexpr double kBernNum[17] = {
    1.0,      -1.0,          1.0,           -1.0,           5.0,       -691.0,
    7.0,      -3617.0,       43867.0,       -174611.0,      854513.0,  -236364091.0,
    8553103.0, -23749461029.0, 8615841276005.0, -7709321041217.0, 2577687858367.0};
inline constexpr double kBernDen[17] = {6.0,   30.0,  42.0, 30.0, 66.0,  2730.0,
                                        6.0,   510.0, 798.0, 330.0, 138.0, 2730.0,
                                        6.0,   870.0, 14322.0, 510.0, 6.0};

// e^v for double v, |v| unrestricted within double range.
inline dd dd_exp(double v) {
    double m = std::round(v / 0.6931471805599453);
    dd p = two_prod(m, kDdLn2.hi);  // exact product, reduction stays exact
    dd s = two_sum(v, -p.hi);
    s = s - dd(p.lo);
    s = s - two_prod(m, kDdLn2.lo);
    // Taylor on |s| <= 0.35
    dd term(1.0), sum(1.0);
    for (int n = 1; n <= 26; ++n) {
        term = term * s / dd(static_cast<double>(n));
        sum = sum + term;
    }
    double scale = std::ldexp(1.0, static_cast<int>(m));
    return {sum.hi * scale, sum.lo * scale};
}

// sin and cos of double a to dd accuracy.
inline void dd_sincos(double a, dd& s_out, dd& c_out) {
    double m = std::round(a / 1.5707963267948966);
    dd p = two_prod(m, kDdPiHalf.hi);
    dd s = two_sum(a, -p.hi);
    s = s - dd(p.lo);
    s = s - two_prod(m, kDdPiHalf.lo);
    // Taylor on |s| <= 0.79
    dd sin_s(0.0), cos_s(1.0), term(1.0);
    for (int n = 1; n <= 30; ++n) {
        term = term * s / dd(static_cast<double>(n));
        switch (n % 4) {
            case 0: cos_s = cos_s + term; break;
            case 1: sin_s = sin_s + term; break;
            case 2: cos_s = cos_s - term; break;
            case 3: sin_s = sin_s - term; break;
        }
    }
    switch (static_cast<long long>(m) % 4 < 0 ? static_cast<long long>(m) % 4 + 4
                                              : static_cast<long long>(m) % 4) {
        case 0: s_out = sin_s; c_out = cos_s; break;
        case 1: s_out = cos_s; c_out = -sin_s; break;
        case 2: s_out = -sin_s; c_out = -cos_s; break;
        case 3: s_out = -cos_s; c_out = sin_s; break;
    }
}

// Natural log of positive dd x.
inline dd dd_log(dd x) {
    double l0 = std::log(x.hi);
    dd r = x * dd_exp(-l0) - dd(1.0);
    dd corr = r - r * r * dd(0.5) + r * r * r / dd(3.0);
    return two_sum(l0, corr.hi) + dd(corr.lo);
}

// atan2 at dd accuracy (x, y not both ~0).
inline dd dd_atan2(dd y, dd x) {
    double a0 = std::atan2(y.hi, x.hi);
    dd s, c;
    dd_sincos(a0, s, c);
    dd num = y * c - x * s;
    dd den = x * c + y * s;
    dd delta = num / den;
    return two_sum(a0, delta.hi) + dd(delta.lo);
}

inline ddc ddc_log(ddc w) {
    dd n = w.re * w.re + w.im * w.im;
    return {dd_log(n) * dd(0.5), dd_atan2(w.im, w.re)};
}

inline ddc ddc_exp(ddc w) {
    dd mag = dd_exp(w.re.hi) * dd_exp(w.re.lo);
    dd s, c;
    dd_sincos(w.im.hi, s, c);
    // rotate by the residual angle w.im.lo (second order; |lo| can reach 1e-14
    // when |Im w| is large)
    dd e(w.im.lo);
    dd half_e2 = e * e * dd(0.5);
    dd s2 = s + c * e - s * half_e2;
    dd c2 = c - s * e - c * half_e2;
    return {mag * c2, mag * s2};
}

// Stirling tail sum_{n>=1} B_{2n} / (2n (2n-1) w^{2n-1}) on |w| >= 40.
inline ddc stirling_lgamma_tail(ddc w) {
    ddc inv = recip(w);
    ddc inv2 = inv * inv;
    ddc p = inv;
    ddc acc(0.0, 0.0);
    for (int n = 1; n <= 17; ++n) {
        dd coeff = dd(kBernNum[n - 1]) / dd(kBernDen[n - 1] * (2.0 * n) * (2.0 * n - 1.0));
        acc = acc + p * coeff;
        p = p * inv2;
    }
    return acc;
}

// log Gamma at dd accuracy; principal for Re z > 0 (shift-extended otherwise,
// exp-consistent everywhere). Caller keeps z away from the poles.
inline ddc dd_log_gamma(ddc z) {
    ddc shift(0.0, 0.0);
    ddc w = z;
    while (w.abs_estimate() < 40.0 || w.re.hi < 0.5) {
        shift = shift + ddc_log(w);
        w.re = w.re + dd(1.0);
    }
    ddc logw = ddc_log(w);
    ddc acc = (w - ddc(0.5, 0.0)) * logw - w;
    acc.re = acc.re + kDdHalfLn2Pi;
    acc = acc + stirling_lgamma_tail(w);
    return acc - shift;
}

// digamma at dd accuracy, same domain handling as dd_log_gamma.
inline ddc dd_digamma(ddc z) {
    ddc acc(0.0, 0.0);
    ddc w = z;
    while (w.abs_estimate() < 40.0 || w.re.hi < 0.5) {
        acc = acc - recip(w);
        w.re = w.re + dd(1.0);
    }
    ddc inv = recip(w);
    ddc inv2 = inv * inv;
    ddc p = inv2;
    ddc tail(0.0, 0.0);
    for (int n = 1; n <= 17; ++n) {
        dd coeff = dd(kBernNum[n - 1]) / dd(kBernDen[n - 1] * (2.0 * n));
        tail = tail + p * coeff;
        p = p * inv2;
    }
    return acc + ddc_log(w) - inv * dd(0.5) - tail;
}

}  // namespace coulomb::detail
