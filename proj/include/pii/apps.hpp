#pragma once
// Spectral-statistics applications of the Hamiltonian trajectory:
//   * log gap probabilities at the soft edge (full and thinned ensembles),
//     ln F(x) = -int_x^inf H(tau; 0, omega) dtau, with omega = 1 - gamma for
//     thinning rate gamma (omega = 0 is the classical beta = 2 law);
//   * the tail exchange identity behind the soft-to-hard-edge transition of
//     the large gap constant;
//   * small least-squares helpers for extracting asymptotic constants from
//     sampled integral values.

#include <pii/regint.hpp>

#include <functional>
#include <stdexcept>
#include <vector>

namespace pii {

// ln of the limiting distribution of the largest eigenvalue, possibly
// thinned: each eigenvalue kept independently with probability 1 - omega.
// The trajectory must carry alpha = 0, where every power-series counterterm
// vanishes and the tail beyond the seed is exponentially negligible.
inline Real gap_log_cdf(const Trajectory& tr, const Real& x) {
    if (tr.par.alpha != 0)
        throw std::domain_error("gap_log_cdf: requires alpha = 0");
    return -tr.integral_sigma(x, tr.s_seed);
}

// Constant term of ln F(x) = -|x|^3/12 - (1/8) ln|x| + c0 + o(1), x -> -inf,
// for the untinned (omega = 0) law:
//   c0 = ln(2)/24 + zeta'(-1).
inline Real tw_constant() { return log(Real(2)) / 24 + zeta_prime_minus_one(); }

// Both sides of the integration-by-parts exchange (t > 0)
//   int_t^inf (tau - t)(u - alpha/sqrt(tau) + alpha^2/tau^2) dtau
//     = -int_t^inf (H + 2 alpha sqrt(tau) + alpha^2/tau) dtau.
// The right-hand side nests inside the regularized Hamiltonian integral; the
// left-hand side is assembled independently from quadrature of u plus the
// termwise tail beyond the seed.
inline std::pair<Real, Real> p34_tail_pair(const Trajectory& tr, const Real& t,
                                           const Real& tol) {
    if (!(t > 0)) throw std::domain_error("p34_tail_pair: requires t > 0");
    const Real& a = tr.par.alpha;
    Real c = tr.s_seed;
    AsymSeries g = sigma_series(a, 48);
    // u = -sigma' termwise: u_k = -g_k (1-3k)/2 on the tau^{-(1+3k)/2} lattice;
    // u_0 = alpha and u_1 = -alpha^2 are the subtracted counterterms
    std::size_t N = g.coeff.size() - 1;
    AsymSeries us{Real(-1) / 2, Real(3) / 2,
                  std::vector<Real>(N + 1, at_current_prec(Real(0)))};
    for (std::size_t k = 0; k <= N; ++k)
        us.coeff[k] = -g.coeff[k] * (Real(1) - 3 * Real(static_cast<long>(k))) / 2;
    auto du = [&](const Real& tau) { // u minus its two counterterms
        return Real(tr.eval(tau).u - a / sqrt(tau) + a * a / (tau * tau));
    };
    Real lhs = quad_gl([&](const Real& tau) { return Real((tau - t) * du(tau)); }, t, c,
                       tol);
    // tail: (tau - t) * sum_{k>=2} u_k tau^{-(1+3k)/2}
    AsymSeries sh{us.e0 + 1, us.step, us.coeff};
    lhs += detail::tail_integral(sh, 2, c).value;
    for (std::size_t k = 0; k <= N; ++k) us.coeff[k] *= -t;
    lhs += detail::tail_integral(us, 2, c).value;

    IntegralResult r2 = i2(tr, t, c);
    Real rhs = -(r2.value - Real(4) / 3 * a * pow(t, Real(3) / 2) - a * a * log(t));
    return {lhs, rhs};
}

// Least squares fit of samples (x_j, y_j) onto the given basis functions;
// normal equations solved by Gaussian elimination with partial pivoting.
inline std::vector<Real> ls_fit(const std::vector<Real>& x, const std::vector<Real>& y,
                                const std::vector<std::function<Real(const Real&)>>& basis) {
    std::size_t m = basis.size(), n = x.size();
    if (n < m) throw std::invalid_argument("ls_fit: more basis functions than samples");
    std::vector<std::vector<Real>> B(n, std::vector<Real>(m));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < m; ++k) B[j][k] = basis[k](x[j]);
    std::vector<std::vector<Real>> A(m, std::vector<Real>(m + 1, at_current_prec(Real(0))));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t j = 0; j < n; ++j) A[i][k] += B[j][i] * B[j][k];
        for (std::size_t j = 0; j < n; ++j) A[i][m] += B[j][i] * y[j];
    }
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (abs(A[r][col]) > abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        if (A[col][col] == 0) throw std::runtime_error("ls_fit: singular normal equations");
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col) continue;
            Real f = A[r][col] / A[col][col];
            for (std::size_t k = col; k <= m; ++k) A[r][k] -= f * A[col][k];
        }
    }
    std::vector<Real> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = A[i][m] / A[i][i];
    return out;
}

// Extract the constant term of a sampled asymptotic expansion
//   y(s) = const + c1 |s|^{-3/2} + c2 |s|^{-3} (+ c3 ln|s| |s|^{-3/2}),
// the logarithmic column being wanted for omega > 0 remainders.
inline Real fit_const(const std::vector<Real>& s, const std::vector<Real>& y,
                      bool with_log = false) {
    std::vector<std::function<Real(const Real&)>> basis = {
        [](const Real&) { return Real(1); },
        [](const Real& t) { return pow(abs(t), Real(-3) / 2); },
        [](const Real& t) { return pow(abs(t), Real(-3)); },
    };
    if (with_log)
        basis.push_back([](const Real& t) { return Real(log(abs(t)) * pow(abs(t), Real(-3) / 2)); });
    return ls_fit(s, y, basis)[0];
}

} // namespace pii
