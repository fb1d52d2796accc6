// Tests for the asymptotic seed series: the Hamiltonian power series at
// s -> +infinity, the w tail series, the exponentially small correction,
// and the left expansion at s -> -infinity.  Closed-form coefficient
// references were obtained independently by symbolic order-by-order
// substitution of the ansatz into the differential equations (sympy) and are
// frozen here.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pii/series.hpp>
#include <pii/specfun.hpp>

using namespace pii;

namespace {

void close(const Real& got, const Real& want, double tol) {
    Real scale = std::max(Real(1), Real(abs(want)));
    CHECK(abs(got - want) / scale < Real(tol));
}

} // namespace

TEST_CASE("sigma series coefficients match closed forms") {
    prec::ScopedPrecision sp(192);
    Real a("0.3");
    AsymSeries g = sigma_series(a, 8);
    CHECK(g.coeff.size() == 9);
    double tol = 1e-40;
    close(g.coeff[0], -2 * a, tol);
    close(g.coeff[1], -a * a, tol);
    close(g.coeff[2], a * (16 * a * a + 1) / 16, tol);
    close(g.coeff[3], -a * a * (32 * a * a + 7) / 16, tol);
    Real a2 = a * a, a4 = a2 * a2;
    close(g.coeff[4], a * (5376 * a4 + 2656 * a2 + 105) / 1024, tol);
    close(g.coeff[5], -a2 * (4096 * a4 + 3728 * a2 + 507) / 256, tol);
    close(g.coeff[8], Real("22.95824467846966552734375"), 1e-38);
    // alpha = 0: the series vanishes identically
    AsymSeries g0 = sigma_series(Real(0), 12);
    for (const Real& c : g0.coeff) CHECK(c == 0);
}

TEST_CASE("w tail series coefficients match closed forms") {
    prec::ScopedPrecision sp(192);
    Real a("0.3");
    AsymSeries v = w_tail_series(a, 6);
    double tol = 1e-40;
    close(v.coeff[0], Real(-1), tol);
    close(v.coeff[1], -(4 * a + 1) / 4, tol);
    close(v.coeff[2], (48 * a * a + 24 * a + 5) / 32, tol);
    close(v.coeff[3], -(4 * a + 1) * (64 * a * a + 32 * a + 15) / 64, tol);
    close(v.coeff[6], Real("49.2879403642578125"), 1e-38);
}

TEST_CASE("left expansion coefficients match closed forms") {
    prec::ScopedPrecision sp(192);
    Real a("0.3");
    AsymSeries L = sigma_left_series(a, 6);
    double tol = 1e-38;
    close(L.coeff[0], Real(1) / 4, tol);
    close(L.coeff[1], Real(1) / 8 - 2 * a * a, tol);
    Real p = (4 * a - 3) * (4 * a - 1) * (4 * a + 1) * (4 * a + 3);
    close(L.coeff[2], p / 64, tol);
    close(L.coeff[3], -p * (16 * a * a - 21) / 128, tol);
    close(L.coeff[6], Real("-69889.38684595438725"), 1e-35);
    // alpha = 1/4 truncates the series after two terms
    AsymSeries Lq = sigma_left_series(Real(1) / 4, 6);
    for (std::size_t k = 2; k < Lq.coeff.size(); ++k) CHECK(abs(Lq.coeff[k]) < Real(1e-45));
}

TEST_CASE("series satisfy their differential equations numerically") {
    prec::ScopedPrecision sp(256);
    Real a("0.3"), s(25);
    // right series: conservation-form residual at optimal truncation
    AsymSeries g = sigma_series(a, 80);
    SeriesEval s0 = eval_series_opt(g, s, 0);
    SeriesEval s1 = eval_series_opt(g, s, 1);
    SeriesEval s2 = eval_series_opt(g, s, 2);
    Real F = s2.value * s2.value +
             4 * s1.value * (s1.value * s1.value - s * s1.value + s0.value) - 4 * a * a;
    CHECK(abs(F) < Real(1e-25)); // floor ~ optimal truncation remainder
    // w series: Riccati residual w' + w^2 - s + 2 sigma' = 0
    AsymSeries v = w_tail_series(a, 80);
    SeriesEval w0 = eval_series_opt(v, s, 0);
    SeriesEval w1 = eval_series_opt(v, s, 1);
    Real rw = w1.value + w0.value * w0.value - s + 2 * s1.value;
    CHECK(abs(rw) < Real(1e-25));
    // left series at t = 20
    Real t(20);
    AsymSeries L = sigma_left_series(a, 30);
    SeriesEval l0 = eval_series_opt(L, t, 0);
    SeriesEval l1 = eval_series_opt(L, t, 1);
    SeriesEval l2 = eval_series_opt(L, t, 2);
    Real Fl = l2.value * l2.value -
              4 * l1.value * (l1.value * l1.value - t * l1.value + l0.value) - 4 * a * a;
    CHECK(abs(Fl) < Real(1e-22));
}

TEST_CASE("correction directions solve the linearized equations") {
    prec::ScopedPrecision sp(256);
    Real a("0.3");
    // right: delta''' = (4 s - 12 sigma') delta' - 2 delta, checked via a
    // central finite-difference stencil for delta''' at high precision
    Real s(20), h = pow(Real(2), -30);
    AsymSeries dser = delta_sigma_series(a, 120);
    AsymSeries g = sigma_series(a, 80);
    auto dval = [&](const Real& x) { return eval_delta_opt(dser, x, 0).value; };
    Real d3 = (dval(s + 2 * h) - 2 * dval(s + h) + 2 * dval(s - h) - dval(s - 2 * h)) /
              (2 * h * h * h);
    Real d1 = eval_delta_opt(dser, s, 1).value;
    Real d0 = eval_delta_opt(dser, s, 0).value;
    Real sp1 = eval_series_opt(g, s, 1).value;
    Real rhs = (4 * s - 12 * sp1) * d1 - 2 * d0;
    CHECK(abs(d3 - rhs) / abs(rhs) < Real(1e-12)); // stencil-limited
    // leading amplitude: d_0 = Gamma(2 alpha + 1) / (2^{3 + 6 alpha} pi)
    Real lead = exp(ln_gamma(2 * a + 1) - (3 + 6 * a) * log(Real(2))) / pi();
    close(dser.coeff[0], lead, 1e-40);

    // left: delta_ttt = (12 sigma_t - 4 t) delta_t + 2 delta at t = 18
    Real t(18);
    AsymSeries dl = delta_left_series(a, 60);
    AsymSeries L = sigma_left_series(a, 40);
    auto lval = [&](const Real& x) { return eval_delta_left_opt(dl, x, 0).value; };
    Real e3 = (lval(t + 2 * h) - 2 * lval(t + h) + 2 * lval(t - h) - lval(t - 2 * h)) /
              (2 * h * h * h);
    Real e1 = eval_delta_left_opt(dl, t, 1).value;
    Real e0 = eval_delta_left_opt(dl, t, 0).value;
    Real lt = eval_series_opt(L, t, 1).value;
    Real rhl = (12 * lt - 4 * t) * e1 + 2 * e0;
    CHECK(abs(e3 - rhl) / abs(rhl) < Real(1e-12));
}

TEST_CASE("optimal truncation reports a plausible floor") {
    prec::ScopedPrecision sp(192);
    Real a("0.3"), s(16);
    AsymSeries g = sigma_series(a, 200);
    auto [n, fl] = optimal_cutoff(g, s);
    CHECK(n > 50);
    CHECK(n < 150);
    // floor ~ e^{-(4/3) s^{3/2}} modulo slowly varying factors
    Real lg = log(fl);
    Real pred = -Real(4) / 3 * pow(s, Real(3) / 2);
    CHECK(abs(lg - pred) < Real(12));
}

TEST_CASE("seed values are consistent between nearby base points") {
    prec::ScopedPrecision sp(320);
    Params p(Real("0.3"), Real(0));
    // the power-series parts at two base points agree with each other after
    // numerical transport only up to the one-instanton remainder; here we
    // only check the reported floors are honest at the evaluation points
    SigmaSeed s1 = seed_sigma(p, Real(16));
    CHECK(s1.err < Real(1e-25));
    CHECK(abs(s1.sigma - (-2 * Real("0.3") * 4)) < Real("0.05"));
    SigmaSeed s2 = seed_sigma_left(Real("0.3"), Real(16), Real(0));
    CHECK(s2.err < Real(1e-20));
    CHECK(abs(s2.sigma - Real(64)) < Real(1));
    CHECK(abs(s2.dsigma + Real(8)) < Real("0.1")); // d sigma/ds ~ s/2 = -t/2
}

TEST_CASE("log f seed matches the Airy function at alpha = 0") {
    // at alpha = 0, omega = 1 the Hamiltonian vanishes identically, so
    // f'' = s f and the recessive normalization gives f = sqrt(2 pi) Ai(s);
    // check the seed values of w and ln f against the Airy function
    prec::ScopedPrecision sp(256);
    Params p(Real(0), Real(1));
    Real s(16);
    LogfSeed lf = seed_logf(p, s);
    Cplx ai = airy_ai(Cplx(s), 0), dai = airy_ai(Cplx(s), 1);
    close(lf.w, dai.re / ai.re, 1e-30);
    close(lf.logf, log(ai.re) + log(sqrt(2 * pi())), 1e-30);
}
