#pragma once
// Closed-form large-|s| limits of the regularized integrals.  The Stokes
// multiplier is written as omega = e^{-2 beta pi i}, i.e. beta = i ln(omega)
// / (2 pi) is purely imaginary for omega > 0; every expression below is then
// real.  The omitted remainders are O(s^{-3/2}) (omega = 0) and
// O(ln|s| / |s|^{3/2}) (omega > 0).

#include <pii/specfun.hpp>

#include <stdexcept>

namespace pii {

inline Cplx beta_of_omega(const Real& omega) {
    if (omega <= 0) throw std::domain_error("beta_of_omega: requires omega > 0");
    return Cplx(Real(0), log(omega) / (2 * pi()));
}

// Limit of I_1(s) - (2 alpha + 1/2) ln s as s -> +infinity at omega = 0:
//   1/2 ln(2 pi) - ln Gamma(1+2 alpha) - (alpha + 1/4) ln 2.
inline Real i1_const_rhs(const Real& alpha) {
    return log(2 * pi()) / 2 - ln_gamma(1 + 2 * alpha) - (alpha + Real(1) / 4) * log(Real(2));
}

// Full right-hand side for omega = 0 at finite s (remainder dropped).
inline Real i1_rhs(const Real& s, const Real& alpha) {
    return (2 * alpha + Real(1) / 2) * log(s) + i1_const_rhs(alpha);
}

// Right-hand side for omega = e^{-2 beta pi i} > 0 at finite s:
//   (alpha/2 - 1/4) ln s + ln|cos(theta/2 + arg Gamma(1+alpha-beta) - pi/4)|
//   + (beta/2) pi i + (5 alpha/3 + 1) ln 2 + ln(|Gamma(1+alpha-beta)| / Gamma(1+2 alpha)),
//   theta = (2 sqrt2 / 3) s^{3/2} - 3 beta i ln s - alpha pi - 5 beta i ln 2.
inline Real i1_rhs(const Real& s, const Real& alpha, const Real& omega) {
    if (omega == 0) return i1_rhs(s, alpha);
    Cplx beta = beta_of_omega(omega);
    Real bi = -beta.im; // beta * i, real
    Real theta = 2 * sqrt(Real(2)) / 3 * pow(s, Real(3) / 2) - 3 * bi * log(s) -
                 alpha * pi() - 5 * bi * log(Real(2));
    Cplx lg = ln_gamma(Cplx(1 + alpha) - beta);
    Real osc = log(abs(cos(theta / 2 + lg.im - pi() / 4)));
    return (alpha / 2 - Real(1) / 4) * log(s) + osc + bi * pi() / 2 +
           (5 * alpha / 3 + 1) * log(Real(2)) + lg.re - ln_gamma(1 + 2 * alpha);
}

// Limit of I_2(s) + s^3/12 + (2 alpha^2 - 1/8) ln|s| as s -> -infinity
// at omega = 0:
//   alpha - ln(2)/24 - zeta'(-1) + ln(G(1+2 alpha)) - alpha ln(2 pi).
inline Real i2_const_rhs(const Real& alpha) {
    return alpha - log(Real(2)) / 24 - zeta_prime_minus_one() +
           ln_barnes_g_1p(2 * alpha) - alpha * log(2 * pi());
}

// Full right-hand side for omega = 0 at finite negative s (remainder dropped).
inline Real i2_rhs(const Real& s, const Real& alpha) {
    return -pow(s, 3) / 12 - (2 * alpha * alpha - Real(1) / 8) * log(abs(s)) +
           i2_const_rhs(alpha);
}

// Right-hand side for omega = e^{-2 beta pi i} > 0 at finite negative s:
//   (4/3) i beta |s|^{3/2} + (3 beta^2 - alpha^2)/2 ln|s| + 3(beta^2-alpha^2) ln 2
//   - alpha beta pi i - ln(G(1+alpha+beta) G(1+alpha-beta) / G(1+2 alpha)).
inline Real i2_rhs(const Real& s, const Real& alpha, const Real& omega) {
    if (omega == 0) return i2_rhs(s, alpha);
    Cplx beta = beta_of_omega(omega);
    Real bi = -beta.im;                 // i beta, real
    Real b2 = -(beta.im * beta.im);     // beta^2, real
    Real as = abs(s);
    Real lnG = 2 * ln_barnes_g_1p(Cplx(alpha) + beta).re - ln_barnes_g_1p(2 * alpha);
    return Real(4) / 3 * bi * pow(as, Real(3) / 2) +
           (3 * b2 - alpha * alpha) / 2 * log(as) +
           3 * (b2 - alpha * alpha) * log(Real(2)) - alpha * bi * pi() - lnG;
}

} // namespace pii
