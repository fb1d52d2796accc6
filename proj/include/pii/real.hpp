// Arbitrary-precision real arithmetic layer.
//
// Real is a variable-precision MPFR-backed floating point number.  The
// working precision is set in bits through prec::set_bits/ScopedPrecision;
// every Real constructed from a literal picks up the precision current at
// construction time, and arithmetic propagates the widest operand precision.
// Routines that need guard bits (cancellation-prone series, etc.) bump the
// precision locally with a ScopedPrecision and round their result back on
// return with at_current_prec().

#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <boost/math/constants/constants.hpp>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace pii {

using Real = boost::multiprecision::mpfr_float;

namespace prec {

inline unsigned bits_to_digits10(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30103)) + 2;
}

inline unsigned& current_bits() {
    thread_local unsigned bits = 192;
    return bits;
}

// Set the working precision in bits (>= 53).
inline void set_bits(unsigned bits) {
    if (bits < 53) throw std::invalid_argument("precision must be >= 53 bits");
    current_bits() = bits;
    Real::default_precision(bits_to_digits10(bits));
}

inline unsigned get_bits() { return current_bits(); }

// RAII guard: raise (or change) the working precision within a scope.
class ScopedPrecision {
  public:
    explicit ScopedPrecision(unsigned bits) : saved_(get_bits()) { set_bits(bits); }
    ~ScopedPrecision() { set_bits(saved_); }
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

  private:
    unsigned saved_;
};

struct Init {
    Init() { set_bits(192); }
};
inline const Init init_once{};

} // namespace prec

// Materialize a copy of x rounded to the current working precision.
inline Real at_current_prec(const Real& x) {
    Real y = x;
    y.precision(prec::bits_to_digits10(prec::get_bits()));
    return y;
}

// Unit roundoff at the current working precision.
inline Real eps() {
    return ldexp(Real(1), -static_cast<int>(prec::get_bits() - 1));
}

inline Real pi() { return boost::math::constants::pi<Real>(); }

inline Real ln2() { return log(Real(2)); }

// Full-precision decimal string (round trip safe for the current precision).
inline std::string to_decimal_string(const Real& x) {
    return x.str(prec::bits_to_digits10(prec::get_bits()), std::ios_base::scientific);
}

// Short human-readable rendering.
inline std::string to_display_string(const Real& x) {
    return x.str(15, std::ios_base::scientific);
}

} // namespace pii
