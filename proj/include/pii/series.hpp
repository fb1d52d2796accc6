#pragma once
// Asymptotic series at s -> +infinity used to seed the ODE integration:
//
//  * the Hamiltonian series      sigma(s) ~ sum_k g_k s^{(1-3k)/2},
//  * the logarithmic-derivative  w(s)     ~ sum_k v_k s^{(1-3k)/2},
//  * the exponentially small correction
//        delta_sigma(s) = kappa * e^{-(4/3) s^{3/2}} sum_m d_m s^{b-m/2},
//    with b = -3 alpha - 1 and kappa = cos(2 pi alpha) - omega.
//
// All series are divergent (factorially growing coefficients) and are
// evaluated by truncation at the smallest term; the evaluator reports the
// size of that term as an error floor.  Seeding far enough to the right
// makes the floor negligible at working precision.

#include <pii/params.hpp>

#include <cstddef>
#include <vector>

namespace pii {

// sum_k c_k s^{e0 - k*step}; step in half-integer units of the exponent.
struct AsymSeries {
    Real e0;
    Real step;
    std::vector<Real> coeff;
};

// Evaluate the deriv-th derivative truncated after n_terms coefficients.
inline Real eval_series(const AsymSeries& q, const Real& s, int deriv, std::size_t n_terms) {
    Real tot = at_current_prec(Real(0));
    std::size_t n = std::min(n_terms, q.coeff.size());
    for (std::size_t k = 0; k < n; ++k) {
        Real e = q.e0 - Real(static_cast<long>(k)) * q.step;
        Real c = q.coeff[k];
        for (int j = 0; j < deriv; ++j) { c *= e; e -= 1; }
        tot += c * pow(s, e);
    }
    return tot;
}

// Index (exclusive) of the smallest nonzero term at s, i.e. the optimal
// truncation point, together with the size of that smallest term.
inline std::pair<std::size_t, Real> optimal_cutoff(const AsymSeries& q, const Real& s) {
    Real best = at_current_prec(Real(0));
    std::size_t bk = q.coeff.size();
    bool found = false;
    for (std::size_t k = 1; k < q.coeff.size(); ++k) {
        if (q.coeff[k] == 0) continue;
        Real t = abs(q.coeff[k]) * pow(s, q.e0 - Real(static_cast<long>(k)) * q.step);
        if (!found || t < best) { best = t; bk = k; found = true; }
    }
    if (!found) return {q.coeff.size(), Real(0)};
    return {bk + 1, best};
}

struct SeriesEval {
    Real value;
    Real floor; // magnitude of the first omitted term
};

inline SeriesEval eval_series_opt(const AsymSeries& q, const Real& s, int deriv) {
    auto [n, fl] = optimal_cutoff(q, s);
    // derivatives multiply term k by a polynomial in its exponent; inflate
    // the floor accordingly
    Real infl = pow(abs(q.e0) + Real(static_cast<long>(q.coeff.size())) * q.step + deriv,
                    Real(deriv));
    return {eval_series(q, s, deriv, n), fl * infl};
}

// --- Hamiltonian power series -------------------------------------------
//
// With sigma = s^{1/2} P(x), x = s^{-3/2}, the third-order conservation form
//   (sigma'')^2 + 4 sigma' ((sigma')^2 - s sigma' + sigma) = 4 alpha^2
// becomes  x^2 R^2 + 4 x Q^3 + 4 Q (P - Q) = 4 alpha^2  with
//   Q = P/2 - (3/2) x P'   (sigma'  = s^{-1/2} Q),
//   R = -Q/2 - (3/2) x Q'  (sigma'' = s^{-3/2} R).
// The coefficient of P_n in the n-th equation is -4 alpha, so the recursion
// is regular for alpha != 0; every coefficient vanishes at alpha = 0.
inline AsymSeries sigma_series(const Real& alpha, std::size_t N) {
    AsymSeries out{Real(1) / 2, Real(3) / 2, std::vector<Real>(N + 1, at_current_prec(Real(0)))};
    if (alpha == 0) return out;
    std::vector<Real>& P = out.coeff;
    std::vector<Real> Q(N + 1, at_current_prec(Real(0))), R(N + 1, at_current_prec(Real(0)));
    std::vector<Real> C2; // running convolution Q*Q, entries 0..n-1 final at step n
    P[0] = -2 * alpha;
    Q[0] = -alpha;
    R[0] = -Q[0] / 2;
    // the n-th coefficient of the conservation-form residual reads
    //   E_n = (R*R)_{n-2} + 4 (Q*Q*Q)_{n-1} + 4 (Q*(P-Q))_n - [n=0] 4 alpha^2,
    // linear in P_n with coefficient -4 alpha; everything else involves only
    // lower indices, so each step costs O(n) multiplications.
    for (std::size_t n = 1; n <= N; ++n) {
        while (C2.size() < n) {
            std::size_t i = C2.size();
            Real c = at_current_prec(Real(0));
            for (std::size_t j = 0; j <= i; ++j) c += Q[j] * Q[i - j];
            C2.push_back(c);
        }
        Real E = at_current_prec(Real(0));
        if (n >= 2)
            for (std::size_t j = 0; j + 2 <= n; ++j) E += R[j] * R[n - 2 - j];
        for (std::size_t j = 0; j + 1 <= n; ++j) E += 4 * Q[j] * C2[n - 1 - j];
        for (std::size_t j = 0; j <= n; ++j) E += 4 * Q[j] * (P[n - j] - Q[n - j]);
        P[n] = E / (4 * alpha);
        Q[n] = P[n] * (Real(1) - 3 * Real(static_cast<long>(n))) / 2;
        R[n] = -Q[n] * (Real(1) + 3 * Real(static_cast<long>(n))) / 2;
    }
    return out;
}

// --- w tail series ---------------------------------------------------------
//
// w = f'/f with f'' = (2u + s) f and u = -sigma', i.e. w' = s - 2 sigma' - w^2.
// With w = s^{1/2} V(x) this reads V^2 - 1 + x (V_Q + 2Q) = 0 where
// V_Q = V/2 - (3/2) x V'.  Leading terms: v_0 = -1, v_1 = -(alpha + 1/4).
inline AsymSeries w_tail_series(const Real& alpha, std::size_t N) {
    AsymSeries g = sigma_series(alpha, N);
    AsymSeries out{Real(1) / 2, Real(3) / 2, std::vector<Real>(N + 1, at_current_prec(Real(0)))};
    std::vector<Real>& v = out.coeff;
    v[0] = Real(-1);
    for (std::size_t n = 1; n <= N; ++n) {
        Real acc = at_current_prec(Real(0));
        for (std::size_t j = 1; j < n; ++j) acc += v[j] * v[n - j];
        Real lam = (Real(1) - 3 * Real(static_cast<long>(n - 1))) / 2;
        acc += (v[n - 1] + 2 * g.coeff[n - 1]) * lam;
        v[n] = acc / 2;
    }
    return out;
}

// --- exponentially small correction ----------------------------------------
//
// delta_sigma = e^{phi} S(s), phi = -(4/3) s^{3/2}, S = sum_m d_m s^{b-m/2}.
// Substituting into the linearization of the third-order equation
//   sigma''' = 4 s sigma' - 6 (sigma')^2 - 2 sigma
// around the power-series solution sigma_0 gives, per power of s, the
// recursion implemented below (the s^{...} bookkeeping uses the sigma_0'
// coefficients q_i = g_i (1-3i)/2 on the s^{-1/2-3i/2} lattice).  The
// indicial balance fixes b = -3 alpha - 1 and makes the m-th coefficient
// solvable with divisor 4m.  Normalization:
//   d_0 = Gamma(2 alpha + 1) / (2^{3 + 6 alpha} pi),
// and the physical correction is kappa * delta_sigma with
//   kappa = cos(2 pi alpha) - omega
// (the real part of e^{2 pi i alpha} - omega: the median-resummation weight
// on the positive real axis).
inline AsymSeries delta_sigma_series(const Real& alpha, std::size_t M) {
    Real b = -3 * alpha - 1;
    AsymSeries out{b, Real(1) / 2, std::vector<Real>(M + 1, at_current_prec(Real(0)))};
    AsymSeries g = sigma_series(alpha, M / 3 + 2);
    std::vector<Real> q(g.coeff.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        q[i] = g.coeff[i] * (Real(1) - 3 * Real(static_cast<long>(i))) / 2;
    Real A = exp(ln_gamma(2 * alpha + 1) - (2 + 6 * alpha) * log(Real(2))) / pi();
    std::vector<Real>& d = out.coeff;
    d[0] = A / 2;
    for (std::size_t m = 1; m <= M; ++m) {
        Real C = at_current_prec(Real(0));
        for (std::size_t i = 1; 3 * i <= m && i < q.size(); ++i)
            C += -24 * q[i] * d[m - 3 * i];
        for (std::size_t i = 0; 3 * i + 3 <= m && i < q.size(); ++i) {
            std::size_t j = m - 3 * i - 3;
            C += 12 * q[i] * (b - Real(static_cast<long>(j)) / 2) * d[j];
        }
        if (m >= 3) {
            Real e = b - Real(static_cast<long>(m - 3)) / 2;
            C += (-6 * e * (e - 1) - 3 * e + Real(1) / 2) * d[m - 3];
        }
        if (m >= 6) {
            Real e = b - Real(static_cast<long>(m - 6)) / 2;
            C += e * (e - 1) * (e - 2) * d[m - 6];
        }
        d[m] = C / (4 * Real(static_cast<long>(m)));
    }
    return out;
}

// e^{phi(s)} S(s) and its first two derivatives, phi = -(4/3) s^{3/2}.
inline SeriesEval eval_delta_opt(const AsymSeries& dser, const Real& s, int deriv) {
    Real phi = -Real(4) / 3 * pow(s, Real(3) / 2);
    Real p1 = -2 * sqrt(s);
    Real p2 = -1 / sqrt(s);
    Real E = exp(phi);
    SeriesEval S0 = eval_series_opt(dser, s, 0);
    if (deriv == 0) return {E * S0.value, E * S0.floor};
    SeriesEval S1 = eval_series_opt(dser, s, 1);
    if (deriv == 1)
        return {E * (S1.value + p1 * S0.value), E * (S1.floor + abs(p1) * S0.floor)};
    SeriesEval S2 = eval_series_opt(dser, s, 2);
    return {E * (S2.value + 2 * p1 * S1.value + (p2 + p1 * p1) * S0.value),
            E * (S2.floor + 2 * abs(p1) * S1.floor + abs(p2 + p1 * p1) * S0.floor)};
}

// --- left expansion (s -> -infinity, omega = 0) ------------------------------
//
// On the negative axis the omega = 0 Hamiltonian grows like s^2/4.  With
// t = -s the conservation form becomes
//   (sigma_tt)^2 - 4 sigma_t ((sigma_t)^2 - t sigma_t + sigma) = 4 alpha^2,
// solved by sigma = sum_k L_k t^{2-3k} with L_0 = 1/4.  Each coefficient
// enters its order linearly with the constant divisor -2, so the recursion
// is regular for every alpha (including alpha = 0), starting from
//   L_1 = 1/8 - 2 alpha^2.
inline AsymSeries sigma_left_series(const Real& alpha, std::size_t N) {
    AsymSeries out{Real(2), Real(3), std::vector<Real>(N + 1, at_current_prec(Real(0)))};
    std::vector<Real>& L = out.coeff;
    L[0] = Real(1) / 4;
    auto e = [](std::size_t k) { return Real(2) - 3 * Real(static_cast<long>(k)); };
    for (std::size_t n = 1; n <= N; ++n) {
        // contributions of indices < n to the t^{3-3n} coefficient
        Real S = at_current_prec(Real(0));
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t j = n - 1 - i;
            S += L[i] * e(i) * (e(i) - 1) * L[j] * e(j) * (e(j) - 1);
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; i + j <= n; ++j) {
                std::size_t k = n - i - j;
                if (j == n || k == n) continue; // index n excluded (collected below)
                S += -4 * L[i] * e(i) * L[j] * e(j) * L[k] * e(k);
            }
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t j = n - i;
            S += 4 * L[i] * e(i) * L[j] * e(j);
            S += -4 * L[i] * e(i) * L[j];
        }
        if (n == 1) S += -4 * alpha * alpha;
        // the L_n terms collect to -2 L_n, so L_n = S / 2
        L[n] = S / 2;
    }
    return out;
}

// Decaying correction direction on the left: delta = e^{phi} S(t) with
// phi = -(2 sqrt 2 / 3) t^{3/2} and S = sum_m h_m t^{-1/4 - 3m/2}, h_0 = 1.
// Substituting e^{phi} S into the linearization
//   delta_ttt = (12 sigma_t - 4 t) delta_t + 2 delta
// of the third-order equation around the left power series gives the m-th
// coefficient with divisor 6m.
inline AsymSeries delta_left_series(const Real& alpha, std::size_t M) {
    AsymSeries sg = sigma_left_series(alpha, M / 2 + 2);
    const std::vector<Real>& L = sg.coeff;
    auto es = [](std::size_t k) { return Real(2) - 3 * Real(static_cast<long>(k)); };
    auto eS = [](std::size_t m) { return Real(-1) / 4 - 3 * Real(static_cast<long>(m)) / 2; };
    Real r2 = sqrt(Real(2));
    AsymSeries out{Real(-1) / 4, Real(3) / 2, std::vector<Real>(M + 1, at_current_prec(Real(0)))};
    std::vector<Real>& h = out.coeff;
    h[0] = Real(1);
    for (std::size_t m = 1; m <= M; ++m) {
        Real S = at_current_prec(Real(0));
        Real E = eS(m - 1);
        // 3 phi' S'' + 3 phi'' S' + phi''' S
        S += (-3 * r2 * E * (E - 1) - (3 * r2 / 2) * E + r2 / 4) * h[m - 1];
        if (m >= 2) {
            Real E2 = eS(m - 2); // S''' term
            S += E2 * (E2 - 1) * (E2 - 2) * h[m - 2];
        }
        // tail of 12 sigma_t against S' and against phi' S
        for (std::size_t k = 1; k < L.size() && 2 * k <= m; ++k)
            S += -12 * L[k] * es(k) * eS(m - 2 * k) * h[m - 2 * k];
        for (std::size_t k = 1; k < L.size() && 2 * k - 1 <= m; ++k)
            S += 12 * r2 * L[k] * es(k) * h[m - (2 * k - 1)];
        h[m] = S / (6 * Real(static_cast<long>(m)));
    }
    return out;
}

// e^{phi(t)} S(t) and t-derivatives, phi = -(2 sqrt 2 / 3) t^{3/2}.
inline SeriesEval eval_delta_left_opt(const AsymSeries& dser, const Real& t, int deriv) {
    Real r2 = sqrt(Real(2));
    Real phi = -2 * r2 / 3 * pow(t, Real(3) / 2);
    Real p1 = -r2 * sqrt(t);
    Real p2 = -r2 / (2 * sqrt(t));
    Real E = exp(phi);
    SeriesEval S0 = eval_series_opt(dser, t, 0);
    if (deriv == 0) return {E * S0.value, E * S0.floor};
    SeriesEval S1 = eval_series_opt(dser, t, 1);
    if (deriv == 1)
        return {E * (S1.value + p1 * S0.value), E * (S1.floor + abs(p1) * S0.floor)};
    SeriesEval S2 = eval_series_opt(dser, t, 2);
    return {E * (S2.value + 2 * p1 * S1.value + (p2 + p1 * p1) * S0.value),
            E * (S2.floor + 2 * abs(p1) * S1.floor + abs(p2 + p1 * p1) * S0.floor)};
}

// --- seed values -------------------------------------------------------------

struct SigmaSeed {
    Real sigma, dsigma, d2sigma;
    Real err; // conservative error floor of the seed values
};

// series length reaching the optimal truncation point at s0 (the smallest
// term index scales like s0^{3/2}; empirically ~1.35 s0^{3/2})
inline std::size_t auto_terms(const Real& s0) {
    return static_cast<std::size_t>(1.5 * std::pow(static_cast<double>(s0), 1.5)) + 24;
}

// Seed values at s0 > 0.  extra_amp is an additional amplitude of the
// exponentially small correction on top of the Stokes weight
// kappa = cos(2 pi alpha) - omega; it absorbs the smooth remainder of the
// optimally truncated power series (determined by two-sided matching).
inline SigmaSeed seed_sigma(const Params& p, const Real& s0,
                            std::size_t N = 0, std::size_t M = 0,
                            const Real& extra_amp = Real(0)) {
    if (N == 0) N = auto_terms(s0);
    if (M == 0) M = N;
    AsymSeries g = sigma_series(p.alpha, N);
    Real kappa = cos(2 * pi() * p.alpha) - p.omega + extra_amp;
    AsymSeries dser;
    bool use_delta = (kappa != 0);
    if (use_delta) dser = delta_sigma_series(p.alpha, M);
    SigmaSeed out{};
    out.err = Real(0);
    Real* slot[3] = {&out.sigma, &out.dsigma, &out.d2sigma};
    for (int dv = 0; dv < 3; ++dv) {
        SeriesEval base = eval_series_opt(g, s0, dv);
        Real v = base.value;
        Real fl = base.floor;
        if (use_delta) {
            SeriesEval corr = eval_delta_opt(dser, s0, dv);
            v += kappa * corr.value;
            fl += abs(kappa) * corr.floor;
        }
        *slot[dv] = v;
        out.err = std::max(out.err, fl);
    }
    return out;
}

// Seed values of the left expansion at s = -t0 (t0 > 0), for omega = 0.
// c_minus is the amplitude of the decaying correction direction; the
// returned derivatives are with respect to s (odd t-derivatives change
// sign).  Series lengths are taken to the optimal truncation scale.
inline SigmaSeed seed_sigma_left(const Real& alpha, const Real& t0, const Real& c_minus,
                                 std::size_t N = 0, std::size_t M = 0) {
    if (N == 0) N = static_cast<std::size_t>(0.45 * std::pow(static_cast<double>(t0), 1.5)) + 16;
    if (M == 0) M = 2 * N;
    AsymSeries L = sigma_left_series(alpha, N);
    AsymSeries dl;
    if (c_minus != 0) dl = delta_left_series(alpha, M);
    SigmaSeed out{};
    out.err = Real(0);
    Real* slot[3] = {&out.sigma, &out.dsigma, &out.d2sigma};
    for (int dv = 0; dv < 3; ++dv) {
        SeriesEval base = eval_series_opt(L, t0, dv);
        Real v = base.value;
        Real fl = base.floor;
        if (c_minus != 0) {
            SeriesEval corr = eval_delta_left_opt(dl, t0, dv);
            v += c_minus * corr.value;
            fl += abs(c_minus) * corr.floor;
        }
        if (dv == 1) v = -v; // d/ds = -d/dt
        *slot[dv] = v;
        out.err = std::max(out.err, fl);
    }
    return out;
}

struct LogfSeed {
    Real logf, w;
    Real err;
};

// ln f(s) from termwise integration of the w series:
//   ln f = -(2/3) s^{3/2} - (alpha + 1/4) ln s - (2 alpha + 1/2) ln 2
//          + sum_{k>=2} v_k s^{(3-3k)/2} / ((3-3k)/2).
// The additive constant fixes the normalization of f as the (1,1) entry of
// the canonical solution at the degenerate Stokes ray.
inline LogfSeed seed_logf(const Params& p, const Real& s0, std::size_t N = 0) {
    if (N == 0) N = auto_terms(s0);
    AsymSeries v = w_tail_series(p.alpha, N);
    SeriesEval we = eval_series_opt(v, s0, 0);
    auto [n, fl] = optimal_cutoff(v, s0);
    Real lf = -Real(2) / 3 * pow(s0, Real(3) / 2)
              - (p.alpha + Real(1) / 4) * log(s0)
              - (2 * p.alpha + Real(1) / 2) * log(Real(2));
    for (std::size_t k = 2; k < std::min(n, v.coeff.size()); ++k) {
        Real e = (Real(3) - 3 * Real(static_cast<long>(k))) / 2;
        lf += v.coeff[k] * pow(s0, e) / e;
    }
    // floor of the integrated tail: first omitted term grows by a factor s
    return {lf, we.value, fl * (s0 + 1)};
}

} // namespace pii
