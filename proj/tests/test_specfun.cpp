// Tests for the multiprecision special-function layer: log-gamma, Barnes G,
// Airy, modified Bessel, Kummer functions, and zeta values.  Reference values
// were computed independently with mpmath at 45 significant digits and are
// frozen here as decimal strings.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pii/specfun.hpp>

using namespace pii;

namespace {

Real rtol_bits(int bits) { return pow(Real(2), -bits); }

void check_close(const Real& got, const char* want, double tol) {
    Real w(want);
    Real scale = std::max(Real(1), Real(abs(w)));
    CHECK(abs(got - w) / scale < Real(tol));
}

void check_close(const Cplx& got, const char* want_re, const char* want_im, double tol) {
    Cplx w{Real(want_re), Real(want_im)};
    Real scale = std::max(Real(1), Real(abs(w)));
    CHECK(abs(got - w) / scale < Real(tol));
}

} // namespace

TEST_CASE("precision control") {
    prec::set_bits(192);
    CHECK(prec::get_bits() == 192u);
    {
        prec::ScopedPrecision sp(320);
        CHECK(prec::get_bits() == 320u);
        Real x = at_current_prec(Real(1)) / 3;
        // 1/3 to 320 bits differs from 1/3 to 192 bits beyond 2^-192
        Real y = x * 3 - 1;
        CHECK(abs(y) < pow(Real(2), -300));
    }
    CHECK(prec::get_bits() == 192u);
}

TEST_CASE("log-gamma against frozen references") {
    prec::ScopedPrecision sp(192);
    double tol = 1e-33;
    check_close(ln_gamma(Real(5)), "3.17805383034794561964694160129705540887399096090351521409674", tol);
    check_close(ln_gamma(Real("0.37")), "0.876946819484879289924913222762958251", tol);
    check_close(ln_gamma(Cplx{Real(2), Real(3)}),
                "-2.09285175309273334956418862503037526",
                "2.30239654346686762615370761778858158", tol);
    // reflection consistency: Gamma(z)Gamma(1-z) = pi/sin(pi z)
    Cplx z{Real("0.3"), Real("0.7")};
    Cplx lhs = ln_gamma(z) + ln_gamma(Cplx{Real(1), Real(0)} - z);
    Cplx rhs = log(Cplx{pi(), Real(0)} / sin(Cplx{pi() * z.re, pi() * z.im}));
    CHECK(abs(lhs - rhs) < rtol_bits(180));
}

TEST_CASE("Barnes G via integral representation") {
    prec::ScopedPrecision sp(192);
    double tol = 1e-33;
    check_close(ln_barnes_g_1p(Real("0.6")), "0.0584051151921077339158815212603407498", tol);
    check_close(ln_barnes_g_1p(Cplx{Real("0.4"), Real("0.2")}),
                "0.0833597805575228352084941565059109095",
                "-0.00331573390447122503937280229040922839", tol);
    // G(1+1) = 1, G(1+2) = 1
    CHECK(abs(ln_barnes_g_1p(Real(1))) < Real(tol));
    CHECK(abs(ln_barnes_g_1p(Real(2))) < Real(tol));
    // functional equation G(1+(z+1)) = Gamma(1+z) G(1+z) in log form
    Real x("0.35");
    Real fe = ln_barnes_g_1p(x + 1) - ln_gamma(x + 1) - ln_barnes_g_1p(x);
    CHECK(abs(fe) < Real(tol));
}

TEST_CASE("Airy function: series, asymptotic, rotation regions") {
    prec::ScopedPrecision sp(192);
    double tol = 1e-33;
    check_close(airy(Cplx{Real(1), Real(0)}).first,
                "0.135292416312881415524147423515466306", "0", tol);
    check_close(airy(Cplx{Real(2), Real("1.5")}).first,
                "-0.0331965467009111116042584156478017184",
                "-0.0364268806274413179769173151280198313", tol);
    check_close(airy(Cplx{Real(-5), Real(0)}).first,
                "0.350761009024114319788016327696742221", "0", tol);
    check_close(airy(Cplx{Real(-5), Real(0)}).second,
                "0.327192818554443136794878677426629198", "0", tol);
    // deep asymptotic region, relative accuracy
    auto a30 = airy(Cplx{Real(30), Real(0)});
    Real want30("3.2082175915504955710752869331847528e-49");
    CHECK(abs(a30.first.re - want30) / want30 < Real(1e-33));
    check_close(airy(Cplx{Real(0), Real(20)}).first,
                "39266255555288274.1905689255576220185",
                "270667244667956824.987120741301595978", 1e-33);
    // Wronskian Ai(z)Ai'(z e^{2pi i/3}) ... use simpler: Ai, Bi-free identity
    // Ai(z) + w Ai(w z) + w^2 Ai(w^2 z) = 0 with w = e^{2 pi i/3}
    Cplx w = exp(Cplx{Real(0), 2 * pi() / 3});
    Cplx z{Real("1.3"), Real("-0.4")};
    Cplx idr = airy(z).first + w * airy(w * z).first + w * w * airy(w * w * z).first;
    CHECK(abs(idr) < rtol_bits(150));
}

TEST_CASE("modified Bessel I and K") {
    prec::ScopedPrecision sp(192);
    double tol = 1e-33;
    auto b = bessel_ik(Real("0.25"), Cplx{Real(2), Real(0)});
    check_close(b.i, "2.2033544516736298660052519313757147", "0", tol);
    check_close(b.k, "0.115378276840856756970831408594596931", "0", tol);
    auto b3 = bessel_ik(Real(3), Cplx{Real("1.7"), Real(0)});
    check_close(b3.i, "0.122232649708443646744216469833386447", "0", tol);
    check_close(b3.k, "1.17831572987198429649933416979559345", "0", tol);
    // large argument (exercises the cancellation guard)
    auto b40 = bessel_ik(Real("0.6"), Cplx{Real(40), Real(0)});
    Real want("8.43025155468982492992114209431397249e-19");
    CHECK(abs(b40.k.re - want) / want < Real(1e-33));
    // Wronskian I_nu(z) K'_nu(z) - I'_nu(z) K_nu(z) = -1/z
    for (const char* nu : {"0.25", "1.75", "2"}) {
        Cplx z{Real("3.2"), Real("0.7")};
        auto w = bessel_ik(Real(nu), z);
        Cplx wr = w.i * w.dk - w.di * w.k + Cplx{Real(1), Real(0)} / z;
        CHECK(abs(wr) < rtol_bits(150));
    }
}

TEST_CASE("Kummer functions phi and psi") {
    prec::ScopedPrecision sp(192);
    double tol = 1e-33;
    check_close(kummer_phi(Cplx{Real("0.3"), Real(0)}, Cplx{Real("1.1"), Real(0)},
                           Cplx{Real(3), Real(1)}),
                "2.89772263589083865421714607624646453",
                "2.08579233287831721493471706799887193", tol);
    check_close(kummer_psi(Cplx{Real("0.3"), Real(0)}, Cplx{Real("1.1"), Real(0)},
                           Cplx{Real(5), Real(2)}),
                "0.594139804135743085465601620886291746",
                "-0.0660952893497743741002829792081333231", tol);
    // large-argument branch
    check_close(kummer_psi(Cplx{Real("0.45"), Real(0)}, Cplx{Real("0.8"), Real(0)},
                           Cplx{Real(60), Real(0)}),
                "0.157670532973299385799238187893386129", "0", tol);
    // Kummer transformation phi(a,b,z) = e^z phi(b-a,b,-z)
    Cplx a{Real("0.4"), Real("0.1")}, bb{Real("1.3"), Real(0)}, z{Real(2), Real("1.5")};
    Cplx lhs = kummer_phi(a, bb, z);
    Cplx rhs = exp(z) * kummer_phi(bb - a, bb, Cplx{Real(0), Real(0)} - z);
    CHECK(abs(lhs - rhs) < rtol_bits(150));
}

TEST_CASE("zeta values and derivative at -1") {
    prec::ScopedPrecision sp(192);
    check_close(zeta(Real(3)), "1.20205690315959428539973816151144999", 1e-33);
    CHECK(abs(zeta(Real(2)) - pi() * pi() / 6) < rtol_bits(180));
    check_close(euler_gamma(), "0.577215664901532860606512090082402431", 1e-33);
    // zeta'(-1) is computed by two independent routes internally and
    // cross-checked; verify the agreed value against the frozen reference
    check_close(zeta_prime_minus_one(), "-0.165421143700450929213919660242780643", 1e-33);
}

TEST_CASE("adaptive quadrature sanity") {
    prec::ScopedPrecision sp(192);
    // int_0^1 ln Gamma(1+t) dt = -1 + ln(2 pi)/2 - ... actually use simpler:
    // int_0^2 e^t dt = e^2 - 1
    Real v = quad_gl([](const Real& t) { return Real(exp(t)); }, Real(0), Real(2), Real(1e-50));
    CHECK(abs(v - (exp(Real(2)) - 1)) < rtol_bits(170));
    // mildly singular derivative endpoint: int_0^1 sqrt(t) dt = 2/3
    Real w = quad_gl([](const Real& t) { return Real(sqrt(t)); }, Real(0), Real(1), Real(1e-35));
    CHECK(abs(w - Real(2) / 3) < Real(1e-15)); // endpoint has unbounded derivative; panels are bisection-limited
}
