#pragma once

// Double-double (compensated) arithmetic for series summation. The Taylor
// series of 1F1 and U on the imaginary axis cancel like e^{|z|}; summing with
// ~32 significant digits keeps the double-precision result intact up to
// |z| ~ 45. Classic error-free transformations (Dekker/Knuth), products via FMA.

#include <cmath>
#include <complex>

namespace coulomb::detail {

struct dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd() = default;
    constexpr dd(double h) : hi(h), lo(0.0) {}
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {  // requires |a| >= |b|
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd operator+(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline dd operator/(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = a - b * dd(q1);
    double q2 = r.hi / b.hi;
    r = r - b * dd(q2);
    double q3 = r.hi / b.hi;
    dd q = quick_two_sum(q1, q2);
    q.lo += q3;
    return quick_two_sum(q.hi, q.lo);
}

inline dd recip(dd b) { return dd(1.0) / b; }

// Complex number with double-double components.
struct ddc {
    dd re;
    dd im;

    ddc() = default;
    ddc(dd r, dd i) : re(r), im(i) {}
    ddc(double r, double i = 0.0) : re(r), im(i) {}
    explicit ddc(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
    double abs_estimate() const { return std::hypot(re.hi, im.hi); }
};

inline ddc operator+(ddc a, ddc b) { return {a.re + b.re, a.im + b.im}; }
inline ddc operator-(ddc a, ddc b) { return {a.re - b.re, a.im - b.im}; }
inline ddc operator-(ddc a) { return {-a.re, -a.im}; }

inline ddc operator*(ddc a, ddc b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline ddc operator*(ddc a, dd s) { return {a.re * s, a.im * s}; }
inline ddc operator/(ddc a, dd s) { return {a.re / s, a.im / s}; }

inline ddc operator/(ddc a, ddc b) {
    dd n = b.re * b.re + b.im * b.im;
    ddc num{a.re * b.re + a.im * b.im, a.im * b.re - a.re * b.im};
    return num / n;
}

inline ddc recip(ddc b) {
    dd n = b.re * b.re + b.im * b.im;
    dd inv = recip(n);
    return {b.re * inv, -(b.im * inv)};
}

// Effective epsilon of the representation (for cancellation error estimates).
inline constexpr double kDdEps = 1.2e-32;

}  // namespace coulomb::detail
