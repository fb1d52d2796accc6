// Complex arithmetic over the arbitrary-precision Real type.
//
// std::complex is not specified for user-defined value types, so this is a
// small self-contained complex class with the elementary functions needed by
// the library.  log/sqrt/pow use the principal branch (arg in (-pi, pi]).

#pragma once

#include "real.hpp"

namespace pii {

struct Cplx {
    Real re, im;

    Cplx() : re(0), im(0) {}
    Cplx(const Real& r) : re(r), im(0) {}            // NOLINT(google-explicit-constructor)
    Cplx(double r) : re(r), im(0) {}                 // NOLINT(google-explicit-constructor)
    Cplx(const Real& r, const Real& i) : re(r), im(i) {}
    Cplx(double r, double i) : re(r), im(i) {}
};

inline const Real& real(const Cplx& z) { return z.re; }
inline const Real& imag(const Cplx& z) { return z.im; }
inline Cplx conj(const Cplx& z) { return {z.re, -z.im}; }

inline Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
inline Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
inline Cplx operator-(const Cplx& a) { return {-a.re, -a.im}; }
inline Cplx operator*(const Cplx& a, const Cplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Cplx operator*(const Real& a, const Cplx& b) { return {a * b.re, a * b.im}; }
inline Cplx operator*(const Cplx& a, const Real& b) { return {a.re * b, a.im * b}; }
inline Cplx operator/(const Cplx& a, const Real& b) { return {a.re / b, a.im / b}; }
inline Cplx operator/(const Cplx& a, const Cplx& b) {
    // Smith's algorithm to avoid overflow in intermediate scales.
    if (abs(b.re) >= abs(b.im)) {
        Real r = b.im / b.re, d = b.re + b.im * r;
        return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
    }
    Real r = b.re / b.im, d = b.re * r + b.im;
    return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
}
inline Cplx& operator+=(Cplx& a, const Cplx& b) { a = a + b; return a; }
inline Cplx& operator-=(Cplx& a, const Cplx& b) { a = a - b; return a; }
inline Cplx& operator*=(Cplx& a, const Cplx& b) { a = a * b; return a; }
inline Cplx& operator/=(Cplx& a, const Cplx& b) { a = a / b; return a; }

inline bool operator==(const Cplx& a, const Cplx& b) { return a.re == b.re && a.im == b.im; }

inline Real abs(const Cplx& z) { return hypot(z.re, z.im); }
inline Real norm(const Cplx& z) { return z.re * z.re + z.im * z.im; }
inline Real arg(const Cplx& z) { return atan2(z.im, z.re); }

inline Cplx exp(const Cplx& z) {
    Real e = exp(z.re);
    return {e * cos(z.im), e * sin(z.im)};
}

inline Cplx log(const Cplx& z) { return {log(abs(z)), arg(z)}; }

inline Cplx sqrt(const Cplx& z) {
    if (z.im == 0 && z.re >= 0) return {sqrt(z.re), Real(0)};
    Real m = abs(z);
    Real u = sqrt((m + z.re) / 2);
    Real v = sqrt((m - z.re) / 2);
    if (z.im < 0) v = -v;
    return {u, v};
}

inline Cplx pow(const Cplx& z, const Cplx& w) {
    if (z.re == 0 && z.im == 0) return {Real(0), Real(0)};
    return exp(w * log(z));
}
inline Cplx pow(const Cplx& z, const Real& p) { return pow(z, Cplx(p)); }

inline Cplx sin(const Cplx& z) {
    return {sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im)};
}
inline Cplx cos(const Cplx& z) {
    return {cos(z.re) * cosh(z.im), -sin(z.re) * sinh(z.im)};
}

inline Cplx i_times(const Cplx& z) { return {-z.im, z.re}; }

inline Cplx at_current_prec(const Cplx& z) {
    return {at_current_prec(z.re), at_current_prec(z.im)};
}

inline std::string to_display_string(const Cplx& z) {
    return "(" + to_display_string(z.re) + ", " + to_display_string(z.im) + ")";
}

} // namespace pii
