#pragma once
// Model Riemann-Hilbert parametrices used by the local analysis: the Airy
// parametrix (four sectors, rays at arg z = 0, +-2pi/3, pi), the Bessel
// parametrix of order nu (three sectors, rays at +-2pi/3, pi), and the
// confluent hypergeometric parametrix (eight sectors, rays every pi/4 except
// +-3pi/4, where the diagonals sit).  Each is returned as an explicit 2x2
// matrix; the defining properties (constant jumps across the rays, the
// normalization at infinity, constant determinant) are what the tests check.

#include <pii/specfun.hpp>

#include <stdexcept>

namespace pii {

struct Mat2C {
    Cplx a, b, c, d; // row-major: [a b; c d]
};

inline Mat2C operator*(const Mat2C& x, const Mat2C& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline Mat2C operator-(const Mat2C& x, const Mat2C& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
}

inline Cplx det(const Mat2C& m) { return m.a * m.d - m.b * m.c; }

inline Mat2C inverse(const Mat2C& m) {
    Cplx dd = det(m);
    if (abs(dd) == 0) throw std::domain_error("inverse: singular matrix");
    return {m.d / dd, -m.b / dd, -m.c / dd, m.a / dd};
}

inline Mat2C identity2() { return {Cplx(Real(1)), Cplx(Real(0)), Cplx(Real(0)), Cplx(Real(1))}; }

inline Real max_abs(const Mat2C& m) {
    Real r = abs(m.a);
    r = std::max(r, Real(abs(m.b)));
    r = std::max(r, Real(abs(m.c)));
    return std::max(r, Real(abs(m.d)));
}

// diag(e^{p}, e^{-p})
inline Mat2C exp_diag(const Cplx& p) {
    return {exp(p), Cplx(Real(0)), Cplx(Real(0)), exp(-p)};
}

namespace detail {

// argument of z placed in (lo, lo + 2 pi]
inline Real arg_from(const Cplx& z, const Real& lo) {
    Real t = arg(z);
    while (t <= lo) t += 2 * pi();
    while (t > lo + 2 * pi()) t -= 2 * pi();
    return t;
}

// w^p on the branch where arg w = theta (theta need not be principal)
inline Cplx pow_branch(const Cplx& w, const Cplx& p, const Real& theta) {
    return exp(p * Cplx(log(abs(w)), theta));
}

// Kummer psi(a,b,w) on the branch arg w = theta, |theta| < 3 pi / 2.  Off
// the principal sheet the connection formula through the entire function
// phi carries the branch in the single power w^{1-b}.
inline Cplx kummer_psi_branch(const Cplx& a, const Cplx& b, const Cplx& w,
                              const Real& theta) {
    if (abs(theta) <= pi()) return kummer_psi(a, b, w);
    Cplx one(Real(1));
    Cplx t1 = exp(ln_gamma(one - b) - ln_gamma(a - b + one)) * kummer_phi(a, b, w);
    Cplx t2 = exp(ln_gamma(b - one) - ln_gamma(a)) * pow_branch(w, one - b, theta) *
              kummer_phi(a - b + one, Cplx(Real(2)) - b, w);
    return t1 + t2;
}

} // namespace detail

// --------------------------------------------------------------------------
// Airy parametrix.  Sectors (by principal argument):
//   I: (0, 2pi/3), II: (2pi/3, pi), III: (-pi, -2pi/3), IV: (-2pi/3, 0).
// Jumps: [1 1; 0 1] on arg z = 0, [1 0; 1 1] on +-2pi/3, [0 1; -1 0] on pi.
// At infinity: z^{-sigma3/4} (I + i sigma1)/sqrt(2) e^{-(2/3) z^{3/2} sigma3}.
inline Mat2C airy_parametrix(const Cplx& z) {
    Real t = arg(z);
    Real third = 2 * pi() / 3;
    Cplx rot_m = exp(Cplx(Real(0), -third)); // e^{-2 pi i/3}
    Cplx rot_p = exp(Cplx(Real(0), third));
    Mat2C base;
    if (t >= 0) {
        auto [a0, d0] = airy(z);
        auto [a1, d1] = airy(rot_m * z);
        base = {a0, a1, d0, rot_m * d1};
    } else {
        auto [a0, d0] = airy(z);
        auto [a1, d1] = airy(rot_p * z);
        base = {a0, -rot_m * a1, d0, -d1};
    }
    base = base * exp_diag(Cplx(Real(0), -pi() / 6));
    Cplx zero(Real(0)), one(Real(1));
    if (t >= third) base = base * Mat2C{one, zero, -one, one};               // II
    if (t < -third) base = base * Mat2C{one, zero, one, one};                // III
    Real sq2pi = sqrt(2 * pi());
    Mat2C M{Cplx(sq2pi) * exp(Cplx(Real(0), pi() / 6)), zero, zero,
            Cplx(Real(0), -sq2pi) * exp(Cplx(Real(0), pi() / 6))};
    return M * base;
}

// --------------------------------------------------------------------------
// Bessel parametrix of order nu.  Sectors (principal argument):
//   I: (-2pi/3, 2pi/3), II: (2pi/3, pi), III: (-pi, -2pi/3).
// Jumps: [1 0; e^{+-nu pi i} 1] on the diagonals and [0 1; -1 0] on pi.
// At infinity:
//   (pi^2 z)^{-sigma3/4} (I + i sigma1)/sqrt(2)
//     (I + (1/(8 sqrt z)) [-1-nu^2, -2i; -2i, 1+nu^2] + O(1/z)) e^{sqrt z sigma3}.
inline Mat2C bessel_parametrix(const Real& nu, const Cplx& z) {
    Real t = arg(z);
    Real third = 2 * pi() / 3;
    Cplx rz = sqrt(z); // principal branch
    BesselIK ik = bessel_ik(nu, rz);
    Cplx zero(Real(0)), one(Real(1));
    Mat2C base{ik.i, i_times(ik.k) / pi(), i_times(rz * ik.di) * pi(), -rz * ik.dk};
    Cplx ha = exp(Cplx(Real(0), nu * pi())); // e^{nu pi i}
    if (t >= third) base = base * Mat2C{one, zero, -ha, one};       // II
    if (t < -third) base = base * Mat2C{one, zero, one / ha, one};  // III
    return base;
}

// --------------------------------------------------------------------------
// Confluent hypergeometric parametrix with parameters (alpha, beta).  Rays
// at arg z = 0, pi/4, pi/2, 3pi/4, pi, -3pi/4, -pi/2, -pi/4 bound sectors
// I..VIII counterclockwise from (0, pi/4).  The explicit solution lives in
// sector I; the others follow by the constant jump matrices
//   J1 = [0 e^{-pi i b}; -e^{pi i b} 0],   J2 = [1 0; e^{pi i(b-2a)} 1],
//   J3 = J7 = diag(e^{pi i a}, e^{-pi i a}), J4 = [1 0; e^{-pi i(b-2a)} 1],
//   J5 = [0 e^{pi i b}; -e^{-pi i b} 0],   J6 = [1 0; e^{-pi i(b+2a)} 1],
//   J8 = [1 0; e^{pi i(b+2a)} 1]
// (a = alpha, b = beta; the rays on the left half are oriented toward the
// origin, so crossing them counterclockwise applies the inverse).
inline Mat2C chf_jump(const Real& alpha, const Cplx& beta, int j) {
    Cplx zero(Real(0)), one(Real(1));
    Cplx ipi(Real(0), pi());
    switch (j) {
        case 1: return {zero, exp(-ipi * beta), -exp(ipi * beta), zero};
        case 2: return {one, zero, exp(ipi * (beta - Cplx(2 * alpha))), one};
        case 3:
        case 7: return exp_diag(ipi * Cplx(alpha));
        case 4: return {one, zero, exp(-ipi * (beta - Cplx(2 * alpha))), one};
        case 5: return {zero, exp(ipi * beta), -exp(-ipi * beta), zero};
        case 6: return {one, zero, exp(-ipi * (beta + Cplx(2 * alpha))), one};
        case 8: return {one, zero, exp(ipi * (beta + Cplx(2 * alpha))), one};
    }
    throw std::domain_error("chf_jump: ray index out of range");
}

namespace detail {

// the explicit sector-I solution, continued to branch arg z = theta
inline Mat2C chf_base(const Real& alpha, const Cplx& beta, const Cplx& z,
                      const Real& theta) {
    Cplx a(alpha), one(Real(1));
    Cplx ipi(Real(0), pi());
    Cplx iz = i_times(z);
    Real tp = theta + pi() / 2, tm = theta - pi() / 2;
    Cplx wp = Real(2) * iz;      // 2 e^{pi i/2} z, arg = tp
    Cplx wm = Real(-2) * iz;     // 2 e^{-pi i/2} z, arg = tm
    Cplx a2 = Real(2) * a, b2 = Real(2) * beta;
    Cplx zp_a = pow_branch(wp, a, tp);
    Cplx em = exp(-iz), ep = exp(iz);
    Cplx g_apb = ln_gamma(one + a + beta) - ln_gamma(a - beta);
    Cplx g_amb = ln_gamma(one + a - beta) - ln_gamma(a + beta);
    Mat2C m;
    m.a = zp_a * kummer_psi_branch(a + beta, one + a2, wp, tp) *
          exp(ipi * (a + b2)) * em;
    m.b = -exp(g_amb) * zp_a * kummer_psi_branch(one + a - beta, one + a2, wm, tm) *
          exp(ipi * (a + beta)) * ep;
    m.c = -exp(g_apb) / zp_a *
          kummer_psi_branch(one - a + beta, one - a2, wp, tp) *
          exp(ipi * (beta - a2 - a)) * em;
    m.d = kummer_psi_branch(-a - beta, one - a2, wm, tm) / zp_a * exp(-ipi * a) * ep;
    Mat2C c0 = exp_diag(beta * Cplx(log(Real(2))) + ipi * beta / Real(2));
    Mat2C ph{exp(-ipi * (a + b2)), Cplx(Real(0)), Cplx(Real(0)),
             exp(ipi * (a2 + beta))};
    return c0 * ph * m;
}

} // namespace detail

inline Mat2C chf_parametrix(const Real& alpha, const Cplx& beta, const Cplx& z) {
    Real t = arg(z); // sectors V..VIII carry their principal (negative) angle
    Real q = pi() / 4;
    Mat2C m = detail::chf_base(alpha, beta, z, t);
    auto J = [&](int j) { return chf_jump(alpha, beta, j); };
    if (t >= 0) {                                                  // I..IV
        if (t >= q) m = m * J(2);
        if (t >= 2 * q) m = m * J(3);
        if (t >= 3 * q) m = m * inverse(J(4));
    } else {                                                       // VIII..V
        m = m * inverse(J(1));
        if (t < -q) m = m * inverse(J(8));
        if (t < -2 * q) m = m * inverse(J(7));
        if (t < -3 * q) m = m * J(6); // sector V sits on the + side of the inward ray
    }
    return m;
}

// bookkeeping check: crossing all eight rays once must return to the start
//   J2 J3 J4^{-1} J5^{-1} J6^{-1} J7 J8 J1 = I
// (inverse factors where the orientation points toward the origin).
inline Mat2C chf_cyclic_product(const Real& alpha, const Cplx& beta) {
    auto J = [&](int j) { return chf_jump(alpha, beta, j); };
    return J(2) * J(3) * inverse(J(4)) * inverse(J(5)) * inverse(J(6)) * J(7) * J(8) *
           J(1);
}

} // namespace pii
