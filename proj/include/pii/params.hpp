#pragma once
// Parameter bundle for the Painleve II family studied here, together with
// the Stokes multipliers attached to the (alpha, omega) pair.

#include <pii/cplx.hpp>
#include <pii/specfun.hpp>

#include <stdexcept>

namespace pii {

struct Params {
    Real alpha;  // alpha > -1/2
    Real omega;  // omega >= 0
    Real nu;     // nu = 2 alpha + 1/2
    Cplx beta;   // beta = i ln(omega) / (2 pi); beta = 0 when omega = 1

    Params(const Real& a, const Real& w) : alpha(a), omega(w) {
        if (!(alpha > Real("-0.5")))
            throw std::invalid_argument("alpha must exceed -1/2");
        if (omega < 0)
            throw std::invalid_argument("omega must be nonnegative");
        nu = 2 * alpha + Real(1) / 2;
        if (omega > 0) {
            Real lw = log(omega);
            beta = Cplx{Real(0), lw / (2 * pi())};
        } else {
            beta = Cplx{Real(0), Real(0)};
        }
    }
};

// Stokes multipliers (s1, s2, s3) of the associated linear problem:
//   s1 = -exp(-2 alpha pi i),  s2 = omega,  s3 = -exp(2 alpha pi i).
struct StokesTriple {
    Cplx s1, s2, s3;
};

inline StokesTriple stokes_triple(const Params& p) {
    Cplx e = exp(Cplx{Real(0), 2 * p.alpha * pi()});
    StokesTriple t;
    t.s1 = Cplx{Real(0), Real(0)} - conj(e); // -e^{-2 alpha pi i}
    t.s2 = Cplx{p.omega, Real(0)};
    t.s3 = Cplx{Real(0), Real(0)} - e;
    return t;
}

// The triple must satisfy s1 - s2 + s3 + s1 s2 s3 = -2 sin(nu pi).
inline Cplx stokes_constraint_residual(const Params& p) {
    StokesTriple t = stokes_triple(p);
    Cplx lhs = t.s1 - t.s2 + t.s3 + t.s1 * t.s2 * t.s3;
    Real rhs = -2 * sin(p.nu * pi());
    return lhs - Cplx{rhs, Real(0)};
}

} // namespace pii
