// Special functions at arbitrary precision: log-gamma, Barnes G, Airy,
// modified Bessel, Kummer confluent hypergeometric functions, and constants
// derived from the Riemann zeta function.
//
// Strategy: Maclaurin/Taylor series near the origin with explicit guard bits
// against cancellation, asymptotic expansions beyond a crossover chosen so
// the optimally-truncated asymptotic error is below the working precision.

#pragma once

#include "cplx.hpp"

#include <gmp.h>
#include <map>
#include <utility>
#include <vector>

namespace pii {

inline Cplx operator/(const Real& a, const Cplx& b) { return Cplx(a) / b; }

namespace detail {

// Exact Bernoulli numbers B_m as GMP rationals, cached.
// B_m = -1/(m+1) * sum_{k=0}^{m-1} C(m+1,k) B_k
class BernoulliTable {
  public:
    static const mpq_t* get(unsigned m) {
        auto& tab = table();
        while (tab.size() <= m) extend(tab);
        return &tab[m].q;
    }

  private:
    struct Q {
        mpq_t q;
        Q() { mpq_init(q); }
        Q(Q&& o) noexcept { mpq_init(q); mpq_swap(q, o.q); }
        ~Q() { mpq_clear(q); }
        Q(const Q&) = delete;
        Q& operator=(const Q&) = delete;
    };
    static std::vector<Q>& table() {
        static std::vector<Q> tab;
        if (tab.empty()) {
            tab.emplace_back();
            mpq_set_ui(tab[0].q, 1, 1); // B_0 = 1
        }
        return tab;
    }
    static void extend(std::vector<Q>& tab) {
        unsigned m = static_cast<unsigned>(tab.size());
        mpq_t acc, term;
        mpq_init(acc);
        mpq_init(term);
        mpz_t binom;
        mpz_init(binom);
        for (unsigned k = 0; k < m; ++k) {
            mpz_bin_uiui(binom, m + 1, k);
            mpq_set_z(term, binom);
            mpq_mul(term, term, tab[k].q);
            mpq_add(acc, acc, term);
        }
        mpq_t div;
        mpq_init(div);
        mpq_set_si(div, -1, m + 1);
        mpq_canonicalize(div);
        mpq_mul(acc, acc, div);
        tab.emplace_back();
        mpq_set(tab.back().q, acc);
        mpq_clear(acc);
        mpq_clear(term);
        mpq_clear(div);
        mpz_clear(binom);
    }
};

inline Real bernoulli(unsigned m) {
    const mpq_t* q = BernoulliTable::get(m);
    Real num(mpq_numref(*q)), den(mpq_denref(*q));
    return num / den;
}

inline Real tiny(unsigned extra_bits = 16) {
    return ldexp(Real(1), -static_cast<int>(prec::get_bits() + extra_bits));
}

} // namespace detail

// ---------------------------------------------------------------------------
// log Gamma
// ---------------------------------------------------------------------------

// log Gamma via the Stirling series after an upward recurrence shift sized to
// the working precision.  exp(ln_gamma(z)) is correct for all z off the
// poles; the arg-part is the principal branch (continuous) for Re z > 0.
inline Cplx ln_gamma(const Cplx& z_in) {
    unsigned bits = prec::get_bits();
    if (z_in.im == 0 && z_in.re <= 0 && z_in.re == floor(z_in.re))
        throw std::domain_error("ln_gamma: pole at non-positive integer");
    prec::ScopedPrecision sp(bits + 48);
    Cplx z(Real(z_in.re), Real(z_in.im));
    // Stirling is accurate once Re z >~ bits*ln2/(2*pi); shift upward.
    double z0 = bits * 0.1103 + 8;
    long n = 0;
    if (static_cast<double>(z.re) < z0)
        n = static_cast<long>(std::ceil(z0 - static_cast<double>(z.re)));
    Cplx shift_log(0);
    for (long j = 0; j < n; ++j) shift_log += log(z + Cplx(Real(j)));
    Cplx w = z + Cplx(Real(n));
    Cplx sum = (w - Cplx(0.5, 0.0)) * log(w) - w + Cplx(log(2 * pi()) / 2);
    Cplx w2 = w * w, wp = w;
    Real tol = detail::tiny();
    for (unsigned k = 1; k < 4 * bits; ++k) {
        Cplx term = detail::bernoulli(2 * k) / (Real(2 * k) * (2 * k - 1)) / wp;
        sum += term;
        if (abs(term) < tol * abs(sum)) break;
        wp *= w2;
    }
    sum -= shift_log;
    prec::ScopedPrecision back(bits);
    return at_current_prec(sum);
}

// Real log Gamma, x > 0.
inline Real ln_gamma(const Real& x) {
    if (x <= 0) throw std::domain_error("ln_gamma(Real): requires x > 0");
    return ln_gamma(Cplx(x)).re;
}

// Gamma(x) for real x off the poles.
inline Real gamma_fn(const Real& x) {
    if (x > 0) return exp(ln_gamma(x));
    Cplx lg = ln_gamma(Cplx(x));
    return exp(lg.re) * cos(lg.im); // sign restored from the imaginary part
}

// ---------------------------------------------------------------------------
// Quadrature helper (smooth integrands)
// ---------------------------------------------------------------------------

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1], cached per (n, precision bits).
inline const std::pair<std::vector<Real>, std::vector<Real>>& gl_rule(unsigned n) {
    static std::map<std::pair<unsigned, unsigned>, std::pair<std::vector<Real>, std::vector<Real>>> cache;
    auto key = std::make_pair(n, prec::get_bits());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<Real> x(n), w(n);
    Real tol = eps() * 16;
    for (unsigned i = 0; i < n; ++i) {
        Real xi(std::cos(M_PI * (i + 0.75) / (n + 0.5)));
        Real p0(1), p1(0), dp(0);
        for (int iter = 0; iter < 200; ++iter) {
            p0 = 1;
            p1 = xi;
            for (unsigned k = 2; k <= n; ++k) {
                Real p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (xi * p1 - p0) / (xi * xi - 1);
            Real dx = p1 / dp;
            xi -= dx;
            if (abs(dx) < tol) break;
        }
        x[i] = xi;
        w[i] = 2 / ((1 - xi * xi) * dp * dp);
    }
    return cache.emplace(key, std::make_pair(std::move(x), std::move(w))).first->second;
}

} // namespace detail

// Adaptive quadrature of a smooth function on [a,b]: Gauss-Legendre panels,
// bisected until the n- and 2n-point values agree to tol (absolute).
template <typename F, typename V = std::invoke_result_t<F, Real>>
V quad_gl(F&& f, const Real& a, const Real& b, const Real& tol, int depth = 0) {
    const unsigned n = 24;
    auto& [x1, w1] = detail::gl_rule(n);
    auto& [x2, w2] = detail::gl_rule(2 * n);
    Real mid = (a + b) / 2, half = (b - a) / 2;
    V s1{}, s2{};
    for (unsigned i = 0; i < n; ++i) s1 += w1[i] * f(mid + half * x1[i]);
    for (unsigned i = 0; i < 2 * n; ++i) s2 += w2[i] * f(mid + half * x2[i]);
    s1 = half * s1;
    s2 = half * s2;
    // rounding floor: with ~3n function values summed, errors below a few
    // hundred ulps of the result are unreachable however finely we bisect
    Real floor = eps() * (abs(s2) + 1) * 512;
    if (abs(s1 - s2) < std::max(tol, floor) || depth > 24) return s2;
    return quad_gl(f, a, mid, tol / 2, depth + 1) + quad_gl(f, mid, b, tol / 2, depth + 1);
}

// ---------------------------------------------------------------------------
// Barnes G
// ---------------------------------------------------------------------------

// log of the Barnes G-function, ln G(1+x) for Re x > -1, via the Loggamma
// integral representation
//   ln G(1+x) = x/2 ln(2 pi) - x(x+1)/2 + x ln Gamma(x+1) - int_0^x ln Gamma(1+t) dt.
inline Cplx ln_barnes_g_1p(const Cplx& x) {
    if (x.re <= -1) throw std::domain_error("ln_barnes_g_1p: Re x must be > -1");
    if (x.re == 0 && x.im == 0) return Cplx(0);
    unsigned bits = prec::get_bits();
    prec::ScopedPrecision sp(bits + 32);
    Cplx xx(Real(x.re), Real(x.im));
    Real tol = detail::tiny();
    // integrate along the straight segment t = x*u, u in [0,1]
    Cplx integral = quad_gl([&](const Real& u) { return xx * ln_gamma(Cplx(1) + xx * u); },
                            Real(0), Real(1), tol);
    Cplx res = xx * (log(2 * pi()) / 2) - xx * (xx + Cplx(1)) * Real(0.5) +
               xx * ln_gamma(xx + Cplx(1)) - integral;
    prec::ScopedPrecision back(bits);
    return at_current_prec(res);
}

inline Real ln_barnes_g_1p(const Real& x) { return ln_barnes_g_1p(Cplx(x)).re; }

// ---------------------------------------------------------------------------
// Airy functions (complex argument)
// ---------------------------------------------------------------------------

namespace detail {

// Maclaurin evaluation of Ai, Ai' with guard bits against the exponential
// cancellation near the negative real axis.
inline std::pair<Cplx, Cplx> airy_series(const Cplx& z_in) {
    unsigned bits = prec::get_bits();
    double az = static_cast<double>(abs(z_in));
    unsigned guard = static_cast<unsigned>(1.93 * std::pow(az, 1.5)) + 48;
    prec::ScopedPrecision sp(bits + guard);
    Cplx z(Real(z_in.re), Real(z_in.im));
    Real c1 = exp(-Real(2) * log(Real(3)) / 3 - ln_gamma(Real(2) / 3));  // Ai(0)
    Real c2 = -exp(-log(Real(3)) / 3 - ln_gamma(Real(1) / 3));          // Ai'(0)
    // f = sum_k z^{3k}/c_k   with t_{k+1} = t_k z^3 /((3k+2)(3k+3))
    // g = sum_k z^{3k+1}/d_k with s_{k+1} = s_k z^3 /((3k+3)(3k+4))
    Cplx z2 = z * z, z3 = z2 * z;
    Cplx tf(1), tg = z;
    Cplx f = tf, g = tg, fp(0), gp(1);
    Real tol = tiny(24);
    for (unsigned long k = 0; k < 200000; ++k) {
        // derivative contributions of the *next* terms:
        //   t_{k+1} (3k+3)/z = t_k z^2 /(3k+2),  s_{k+1} (3k+4)/z = s_k z^2/(3k+3)
        fp += tf * z2 / Real(3 * k + 2);
        gp += tg * z2 / Real(3 * k + 3);
        tf = tf * z3 / Real((3 * k + 2) * (3 * k + 3));
        tg = tg * z3 / Real((3 * k + 3) * (3 * k + 4));
        f += tf;
        g += tg;
        if (abs(tf) + abs(tg) < tol * (abs(f) + abs(g) + 1)) break;
    }
    Cplx ai = c1 * f + c2 * g;
    Cplx aip = c1 * fp + c2 * gp;
    prec::ScopedPrecision back(bits);
    return {at_current_prec(ai), at_current_prec(aip)};
}

// Asymptotic expansion, for |arg z| <= 2 pi/3 and |z| beyond the crossover:
//   Ai  =  e^{-xi}/(2 sqrt(pi) z^{1/4}) sum_k (-1)^k u_k xi^{-k}
//   Ai' = -e^{-xi} z^{1/4}/(2 sqrt(pi)) sum_k (-1)^k v_k xi^{-k}
// u_{k+1} = u_k (6k+1)(6k+3)(6k+5)/(216 (k+1)(2k+1)),  v_k = u_k (6k+1)/(1-6k).
inline std::pair<Cplx, Cplx> airy_asymptotic(const Cplx& z) {
    unsigned bits = prec::get_bits();
    prec::ScopedPrecision sp(bits + 32);
    Cplx zz(Real(z.re), Real(z.im));
    Cplx sz = sqrt(zz);
    Cplx xi = Real(2) / 3 * sz * zz;
    Cplx sum_u(1), sum_v(1);
    Real uk(1);
    Cplx xik(1);
    Real last(1e300);
    Real tol = tiny();
    for (unsigned long k = 0; k < 8 * bits; ++k) {
        uk *= Real((6 * k + 1) * (6 * k + 3)) * (6 * k + 5) /
              (Real(216) * (k + 1) * (2 * k + 1));
        Real vk = uk * Real(6 * (k + 1) + 1) / Real(1 - 6 * static_cast<long>(k + 1));
        xik /= -xi;
        Cplx tu = uk * xik;
        Real atu = abs(tu);
        if (atu > last) break; // past the optimal truncation point
        last = atu;
        sum_u += tu;
        sum_v += vk * xik;
        if (atu < tol) break;
    }
    Real spi = sqrt(pi());
    Cplx pre = exp(-xi) / (2 * spi);
    Cplx ai = pre / sqrt(sz) * sum_u;
    Cplx aip = -pre * sqrt(sz) * sum_v;
    prec::ScopedPrecision back(bits);
    return {at_current_prec(ai), at_current_prec(aip)};
}

} // namespace detail

// Ai(z), Ai'(z) for complex z.  Maclaurin series below the precision-dependent
// crossover |z| = (0.52 (bits+16))^{2/3}; asymptotic expansion beyond it, with
// the connection rotation
//   Ai(z) + e^{2 pi i/3} Ai(e^{2 pi i/3} z) + e^{-2 pi i/3} Ai(e^{-2 pi i/3} z) = 0
// applied first when z is near the negative real axis.
inline std::pair<Cplx, Cplx> airy(const Cplx& z) {
    unsigned bits = prec::get_bits();
    double zcross = std::pow(0.5199 * (bits + 16), 2.0 / 3.0);
    if (static_cast<double>(abs(z)) <= zcross) return detail::airy_series(z);
    if (abs(arg(z)) <= 2 * pi() / 3) return detail::airy_asymptotic(z);
    prec::ScopedPrecision sp(bits + 32);
    Cplx zz(Real(z.re), Real(z.im));
    Cplx w1 = exp(Cplx(Real(0), 2 * pi() / 3));
    Cplx w2 = conj(w1);
    auto [a1, a1p] = detail::airy_asymptotic(w1 * zz);
    auto [a2, a2p] = detail::airy_asymptotic(w2 * zz);
    Cplx ai = -(w1 * a1 + w2 * a2);
    Cplx aip = -(w1 * w1 * a1p + w2 * w2 * a2p);
    prec::ScopedPrecision back(bits);
    return {at_current_prec(ai), at_current_prec(aip)};
}

// Real-argument convenience wrapper.
inline std::pair<Real, Real> airy(const Real& x) {
    auto [ai, aip] = airy(Cplx(x));
    return {ai.re, aip.re};
}

// ---------------------------------------------------------------------------
// Modified Bessel functions I_nu, K_nu (complex argument, real order)
// ---------------------------------------------------------------------------

Real euler_gamma(); // defined below with the zeta machinery

namespace detail {

// Power series for I_nu and its derivative.
inline std::pair<Cplx, Cplx> bessel_i_series(const Real& nu, const Cplx& z) {
    Cplx zh = z * Real(0.5);
    Cplx zh2 = zh * zh;
    Cplx pref = exp(nu * log(zh) - ln_gamma(Cplx(nu + 1)));
    Cplx term(1), sum(1), dsum(nu);
    Real tol = tiny();
    for (unsigned k = 1; k < 200000; ++k) {
        term = term * zh2 / (Real(k) * (nu + k));
        sum += term;
        dsum += term * (nu + 2 * k);
        if (abs(term) < tol * (abs(sum) + 1)) break;
    }
    // I'_nu = (1/z) (z/2)^nu/Gamma(nu+1) * sum_k (nu+2k) (z^2/4)^k/(k! (nu+1)_k)
    return {pref * sum, pref * dsum / z};
}

// K_n for integer n >= 0 via the logarithmic series.
inline Cplx bessel_k_int_series(unsigned n, const Cplx& z) {
    Cplx zh = z * Real(0.5);
    Cplx zh2 = zh * zh;
    Cplx lzh = log(zh);
    Cplx fin(0);
    if (n > 0) {
        // (1/2)(z/2)^{-n} sum_{k=0}^{n-1} (n-k-1)!/k! (-z^2/4)^k
        Real fact(1);
        for (unsigned j = 1; j < n; ++j) fact *= j;
        Cplx t = exp(-Real(n) * lzh) * Real(0.5) * fact;
        for (unsigned k = 0; k < n; ++k) {
            fin += t;
            if (k + 1 < n) t = t * (-zh2) / (Real(k + 1) * (n - k - 1));
        }
    }
    auto [in, inp] = bessel_i_series(Real(n), z);
    Real sgn = (n % 2 == 0) ? Real(1) : Real(-1);
    Cplx logpart = -sgn * lzh * in;
    Real eg = euler_gamma();
    Real psi1 = -eg, psi2 = -eg;
    for (unsigned j = 1; j <= n; ++j) psi2 += Real(1) / j;
    Real fact(1);
    for (unsigned j = 1; j <= n; ++j) fact *= j;
    Cplx t = exp(Real(n) * lzh) / fact;
    Cplx psisum(0);
    Real tol = tiny();
    for (unsigned k = 0; k < 200000; ++k) {
        Cplx term = (psi1 + psi2) * t;
        psisum += term;
        if (k > 2 && abs(term) < tol * (abs(psisum) + 1)) break;
        t = t * zh2 / (Real(k + 1) * (n + k + 1));
        psi1 += Real(1) / (k + 1);
        psi2 += Real(1) / (n + k + 1);
    }
    return fin + logpart + sgn * Real(0.5) * psisum;
}

} // namespace detail

struct BesselIK {
    Cplx i, di, k, dk; // I_nu, I'_nu, K_nu, K'_nu
};

// Modified Bessel functions of real order nu and complex argument z off the
// cut (-inf,0].  Series evaluation with guard bits sized to the exponential
// cancellation in K; adequate through |z| of a few hundred.  Non-integer
// orders very close to an integer lose ~log2(1/distance) bits (guarded).
inline BesselIK bessel_ik(const Real& nu_in, const Cplx& z_in) {
    unsigned bits = prec::get_bits();
    double az = static_cast<double>(abs(z_in));
    unsigned guard = static_cast<unsigned>(2.9 * az) + 48;
    Real nearest = round(nu_in);
    bool is_int = (nu_in == nearest);
    if (!is_int) {
        double d = std::abs(static_cast<double>(nu_in - nearest));
        if (d < 1e-4) guard += static_cast<unsigned>(-std::log2(d)) + 8;
    }
    prec::ScopedPrecision sp(bits + guard);
    Cplx z(Real(z_in.re), Real(z_in.im));
    Real nu = at_current_prec(nu_in);
    BesselIK out;
    if (!is_int) {
        auto [i1, di1] = detail::bessel_i_series(nu, z);
        auto [i2, di2] = detail::bessel_i_series(-nu, z);
        Real f = pi() / (2 * sin(nu * pi()));
        out.i = i1;
        out.di = di1;
        out.k = f * (i2 - i1);
        out.dk = f * (di2 - di1);
    } else {
        long n = static_cast<long>(nearest);
        unsigned an = static_cast<unsigned>(n < 0 ? -n : n);
        auto [i1, di1] = detail::bessel_i_series(Real(an), z); // I_{-n} = I_n
        Cplx kn = detail::bessel_k_int_series(an, z);
        Cplx kn1 = detail::bessel_k_int_series(an + 1, z);
        out.i = i1;
        out.di = di1;
        out.k = kn; // K_{-n} = K_n
        out.dk = -kn1 + Real(an) * kn / z;
    }
    prec::ScopedPrecision back(bits);
    out.i = at_current_prec(out.i);
    out.di = at_current_prec(out.di);
    out.k = at_current_prec(out.k);
    out.dk = at_current_prec(out.dk);
    return out;
}

// ---------------------------------------------------------------------------
// Kummer confluent hypergeometric functions
// ---------------------------------------------------------------------------

// phi(a,b,z) = 1F1(a;b;z), entire in z.  The evaluation restarts at higher
// precision if the largest series term overwhelms the requested accuracy.
inline Cplx kummer_phi(const Cplx& a, const Cplx& b, const Cplx& z_in) {
    if (b.im == 0 && b.re <= 0 && b.re == floor(b.re))
        throw std::domain_error("kummer_phi: b must not be a non-positive integer");
    unsigned bits = prec::get_bits();
    unsigned guard = static_cast<unsigned>(2.9 * static_cast<double>(abs(z_in))) + 48;
    for (int attempt = 0; attempt < 4; ++attempt) {
        prec::ScopedPrecision sp(bits + guard);
        Cplx z(Real(z_in.re), Real(z_in.im));
        Cplx term(1), sum(1);
        Real maxterm(1);
        Real tol = detail::tiny();
        for (unsigned k = 0; k < 400000; ++k) {
            term = term * (a + Cplx(Real(k))) / (b + Cplx(Real(k))) * z / Real(k + 1);
            sum += term;
            Real at = abs(term);
            if (at > maxterm) maxterm = at;
            if (at < tol * (abs(sum) + 1)) break;
        }
        Real lost = log2(maxterm / (abs(sum) + detail::tiny(static_cast<int>(guard))));
        if (lost < Real(guard) - 24) {
            prec::ScopedPrecision back(bits);
            return at_current_prec(sum);
        }
        guard = static_cast<unsigned>(static_cast<double>(lost)) + 64;
    }
    throw std::runtime_error("kummer_phi: cancellation guard failed to converge");
}

// psi(a,b,z): the solution with psi ~ z^{-a} as z -> infinity, principal
// powers (callers stay within |arg z| < pi).  Uses the asymptotic series when
// its optimal truncation reaches the working precision, otherwise the
// connection formula
//   psi = Gamma(1-b)/Gamma(a-b+1) phi(a,b,z)
//       + Gamma(b-1)/Gamma(a) z^{1-b} phi(a-b+1,2-b,z),  b not an integer.
inline Cplx kummer_psi(const Cplx& a, const Cplx& b, const Cplx& z) {
    unsigned bits = prec::get_bits();
    {
        prec::ScopedPrecision sp(bits + 32);
        Cplx zz(Real(z.re), Real(z.im));
        Cplx term(1), sum(1);
        Real tol = detail::tiny(8);
        Real last(1e300);
        bool converged = false;
        for (unsigned k = 0; k < 8 * bits; ++k) {
            term = term * (a + Cplx(Real(k))) * (a - b + Cplx(Real(k + 1))) / Real(k + 1) / (-zz);
            Real at = abs(term);
            if (at > last) break;
            last = at;
            sum += term;
            if (at < tol * abs(sum)) {
                converged = true;
                break;
            }
        }
        if (converged) {
            Cplx res = exp(-a * log(zz)) * sum;
            prec::ScopedPrecision back(bits);
            return at_current_prec(res);
        }
    }
    if (b.im == 0 && b.re == floor(b.re))
        throw std::domain_error("kummer_psi: integer b requires |z| in the asymptotic regime");
    unsigned guard = static_cast<unsigned>(2.9 * static_cast<double>(abs(z))) + 64;
    for (int attempt = 0; attempt < 4; ++attempt) {
        prec::ScopedPrecision sp(bits + guard);
        Cplx zz(Real(z.re), Real(z.im));
        Cplx aa(Real(a.re), Real(a.im)), bb(Real(b.re), Real(b.im));
        Cplx one(1);
        Cplx t1 = exp(ln_gamma(one - bb) - ln_gamma(aa - bb + one)) * kummer_phi(aa, bb, zz);
        Cplx t2 = exp(ln_gamma(bb - one) - ln_gamma(aa) + (one - bb) * log(zz)) *
                  kummer_phi(aa - bb + one, Cplx(2.0, 0.0) - bb, zz);
        Cplx sum = t1 + t2;
        Real big = abs(t1);
        if (abs(t2) > big) big = abs(t2);
        Real lost = log2(big / (abs(sum) + detail::tiny(static_cast<int>(guard))));
        if (lost < Real(guard) - 24) {
            prec::ScopedPrecision back(bits);
            return at_current_prec(sum);
        }
        guard = static_cast<unsigned>(static_cast<double>(lost)) + 96;
    }
    throw std::runtime_error("kummer_psi: cancellation guard failed to converge");
}

// ---------------------------------------------------------------------------
// Zeta values and Euler's constant
// ---------------------------------------------------------------------------

namespace detail {

// Euler-Maclaurin for zeta(s) and zeta'(s), real s != 1 (valid well past the
// values needed here; the Bernoulli tail is truncated at its smallest term).
inline std::pair<Real, Real> zeta_em(const Real& s) {
    unsigned bits = prec::get_bits();
    prec::ScopedPrecision sp(bits + 32);
    Real ss = at_current_prec(s);
    unsigned N = static_cast<unsigned>(0.13 * bits) + 24;
    Real z(0), dz(0);
    for (unsigned n = 1; n < N; ++n) {
        Real ln_n = log(Real(n));
        Real p = exp(-ss * ln_n);
        z += p;
        dz += -ln_n * p;
    }
    Real lnN = log(Real(N));
    Real NmS = exp(-ss * lnN); // N^{-s}
    z += NmS * N / (ss - 1);
    dz += -NmS * N * lnN / (ss - 1) - NmS * N / ((ss - 1) * (ss - 1));
    z += NmS / 2;
    dz += -lnN * NmS / 2;
    // + sum_k B_{2k}/(2k)! (s)_{2k-1} N^{-s-2k+1}
    Real poch = ss, dpoch(1); // (s)_{2k-1} and its s-derivative
    Real N2 = Real(N) * N;
    Real Npow = NmS * N;
    Real fact(2);
    Real tol = tiny();
    for (unsigned k = 1; k < 4 * bits; ++k) {
        Npow /= N2;
        Real c = bernoulli(2 * k) / fact;
        Real term = c * poch * Npow;
        Real dterm = c * (dpoch - poch * lnN) * Npow;
        z += term;
        dz += dterm;
        if (abs(term) + abs(dterm) < tol * (abs(z) + abs(dz) + 1)) break;
        for (unsigned m = 2 * k - 1; m <= 2 * k; ++m) {
            dpoch = dpoch * (ss + m) + poch;
            poch = poch * (ss + m);
        }
        fact *= Real(2 * k + 1) * (2 * k + 2);
    }
    prec::ScopedPrecision back(bits);
    return {at_current_prec(z), at_current_prec(dz)};
}

} // namespace detail

inline Real zeta(const Real& s) { return detail::zeta_em(s).first; }
inline Real zeta_prime(const Real& s) { return detail::zeta_em(s).second; }

// Euler-Mascheroni constant by Euler-Maclaurin on the harmonic sum.
inline Real euler_gamma() {
    static std::map<unsigned, Real> cache;
    unsigned bits = prec::get_bits();
    auto it = cache.find(bits);
    if (it != cache.end()) return it->second;
    prec::ScopedPrecision sp(bits + 32);
    unsigned N = static_cast<unsigned>(0.13 * bits) + 24;
    Real h(0);
    for (unsigned n = 1; n <= N; ++n) h += Real(1) / n;
    Real g = h - log(Real(N)) - Real(1) / (2 * N);
    Real N2 = Real(N) * N;
    Real Npow(1);
    Real tol = detail::tiny();
    Real last(1e300);
    for (unsigned k = 1; k < 4 * bits; ++k) {
        Npow *= N2;
        Real term = detail::bernoulli(2 * k) / (2 * k * Npow);
        if (abs(term) > last) break;
        last = abs(term);
        g += term;
        if (abs(term) < tol) break;
    }
    prec::ScopedPrecision back(bits);
    Real out = at_current_prec(g);
    cache.emplace(bits, out);
    return out;
}

// zeta'(-1) with a dual-route cross check:
//   route 1: Euler-Maclaurin directly at s = -1;
//   route 2: functional-equation route zeta'(-1) = 1/12 - ln A with
//            ln A = (euler_gamma + ln 2 pi)/12 - zeta'(2)/(2 pi^2).
// Throws if the routes disagree beyond the working-precision budget.
inline Real zeta_prime_minus_one() {
    static std::map<unsigned, Real> cache;
    unsigned bits = prec::get_bits();
    auto it = cache.find(bits);
    if (it != cache.end()) return it->second;
    Real r1 = zeta_prime(Real(-1));
    Real lnA = (euler_gamma() + log(2 * pi())) / 12 - zeta_prime(Real(2)) / (2 * pi() * pi());
    Real r2 = Real(1) / 12 - lnA;
    if (abs(r1 - r2) > ldexp(Real(1), -static_cast<int>(bits) + 24))
        throw std::runtime_error("zeta_prime_minus_one: route disagreement");
    cache.emplace(bits, r1);
    return r1;
}

} // namespace pii
