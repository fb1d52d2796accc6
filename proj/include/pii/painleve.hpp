#pragma once
// Construction of the pole-free-at-+infinity (tronquee) Hamiltonian
// trajectory and the associated linear-problem entry f.
//
// State along the real axis (and along complex detours around real poles):
//   sigma'''(s) = 4 s sigma'(s) - 6 sigma'(s)^2 - 2 sigma(s),
//   f''(s)      = (s - 2 sigma'(s)) f(s),
// integrated jointly by adaptive Taylor steps.  The first equation is the
// derivative of the conservation form
//   (sigma'')^2 + 4 sigma' ((sigma')^2 - s sigma' + sigma) = 4 alpha^2,
// whose drift is monitored as a running error control.  Derived fields:
//   u = -sigma',  w = f'/f,  H = sigma,
// with w satisfying w' = s - 2 sigma' - w^2, i.e. the Riccati form of the
// linear equation.  Simple zeros of f are the real poles of w (residue 1);
// for omega > 1 the Hamiltonian itself acquires real simple poles (residue
// 1), which the integrator passes by a semicircular detour through the
// upper half plane.  Principal-value integrals over the real axis then
// correspond to the real part of the contour integral.

#include <pii/series.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace pii {

namespace detail {

// f Taylor coefficients at z0 from the sigma coefficients a (degree n) and
// the initial pair (b0, b1); b gets degree n+2.
inline void f_taylor(const Cplx& z0, const std::vector<Cplx>& a, std::size_t n,
                     const Cplx& b0, const Cplx& b1, std::vector<Cplx>& b) {
    // coefficients of (s - 2 sigma') around z0
    std::vector<Cplx> cc(n + 1, Cplx{Real(0), Real(0)});
    for (std::size_t j = 0; j + 1 <= n; ++j)
        cc[j] = Cplx{Real(0), Real(0)} - a[j + 1] * Real(2 * static_cast<long>(j + 1));
    cc[0] += z0;
    if (n >= 1) cc[1] += Cplx{Real(1), Real(0)};
    b.assign(n + 3, Cplx{Real(0), Real(0)});
    b[0] = b0;
    b[1] = b1;
    for (std::size_t k = 0; k + 2 <= n + 2; ++k) {
        Cplx acc{Real(0), Real(0)};
        for (std::size_t j = 0; j <= k && j <= n; ++j)
            if (k - j < b.size()) acc += cc[j] * b[k - j];
        b[k + 2] = acc * (Real(1) / Real(static_cast<long>((k + 1) * (k + 2))));
    }
}

// Taylor coefficients at z0 of sigma (a, degree n) and f (b, degree n+2)
// from the state y = (sigma, sigma', sigma'', f, f').
inline void pii_taylor(const Cplx& z0, const std::array<Cplx, 5>& y, std::size_t n,
                       std::vector<Cplx>& a, std::vector<Cplx>& b) {
    a.assign(n + 1, Cplx{Real(0), Real(0)});
    b.assign(n + 3, Cplx{Real(0), Real(0)});
    a[0] = y[0];
    a[1] = y[1];
    a[2] = y[2] * Real(0.5);
    for (std::size_t k = 0; k + 3 <= n; ++k) {
        Cplx d = (z0 * (Real(static_cast<long>(k + 1)) * a[k + 1])) * Real(4);
        if (k >= 1) d += a[k] * Real(4 * static_cast<long>(k));
        Cplx c{Real(0), Real(0)};
        for (std::size_t j = 0; j <= k; ++j)
            c += (Real(static_cast<long>(j + 1)) * a[j + 1]) *
                 (Real(static_cast<long>(k - j + 1)) * a[k - j + 1]);
        a[k + 3] = (d - c * Real(6) - a[k] * Real(2)) *
                   (Real(1) / Real(static_cast<long>((k + 1) * (k + 2) * (k + 3))));
    }
    f_taylor(z0, a, n, y[3], y[4], b);
}

inline Cplx horner(const std::vector<Cplx>& c, const Cplx& h) {
    Cplx v{Real(0), Real(0)};
    for (std::size_t k = c.size(); k-- > 0;) v = v * h + c[k];
    return v;
}

inline Cplx horner_deriv(const std::vector<Cplx>& c, const Cplx& h, int deriv) {
    Cplx v{Real(0), Real(0)};
    for (std::size_t k = c.size(); k-- > static_cast<std::size_t>(deriv);) {
        Real fac(1);
        for (int j = 0; j < deriv; ++j) fac *= Real(static_cast<long>(k - j));
        v = v * h + c[k] * fac;
    }
    return v;
}

} // namespace detail

struct Step {
    Cplx z0; // start of the step
    Cplx h;  // chord to the end of the step
    std::vector<Cplx> a; // sigma Taylor coefficients at z0
    std::vector<Cplx> b; // f Taylor coefficients at z0
    bool real_chord;     // lies on the real axis
};

struct PIIState {
    Real s;
    Real sigma, dsigma, d2sigma; // H, H', H''
    Real f, df;                  // f and f'
    Real u, H;                   // u = -H', H = sigma
    Real w;                      // f'/f (infinite at f zeros)
    bool w_finite;
};

struct SolveOptions {
    Real s_seed = Real(0);       // 0: chosen automatically (see solve)
    Real tol = Real(0);          // 0: chosen from working precision
    unsigned order = 0;          // Taylor order per step; 0: automatic
    unsigned target_digits = 30; // accuracy goal at the far end of the run
    Real detour_radius = Real("0.08");
};

class Trajectory {
public:
    Params par;
    Real s_seed, s_end;
    std::vector<Step> steps;             // ordered along the path
    std::vector<Real> sigma_poles;       // real poles of H (omega > 1)
    std::vector<Real> f_zeros;           // real zeros of f = poles of w
    Real cons_err = Real(0);             // max first-integral drift
    Real detour_imag_err = Real(0);      // max |Im state| after re-landing
    Real seed_err = Real(0);             // series floor at the seed point
    bool matched = false;                // two-sided construction used
    Real c_plus = Real(0);               // correction amplitude, right seed
    Real c_minus = Real(0);              // correction amplitude, left seed
    Real match_resid = Real(0);          // (sigma, sigma') mismatch at the junction

    Trajectory(const Params& p) : par(p) {}

    // Dense evaluation at real s inside the integrated range.  Points lying
    // under a pole detour are reached by a fresh short integration from the
    // nearest real endpoint of the detour.
    PIIState eval(const Real& s) const;

    // ln |f(s)|, continuous branch of Re ln f
    Real log_abs_f(const Real& s) const {
        PIIState st = eval(s);
        return log(abs(st.f));
    }

    // Principal value of int_a^b sigma ds (exact per-step polynomial
    // integration; detours contribute their contour integral, whose
    // imaginary part is pi * (number of enclosed poles) and is discarded).
    Real integral_sigma(const Real& a, const Real& b) const;

    bool in_detour(const Real& s) const {
        for (const Real& p : sigma_poles)
            if (abs(s - p) <= detour_radius_ * Real("1.0000001")) return true;
        return false;
    }

    Real detour_radius_ = Real(0);

private:
    friend Trajectory solve(const Params&, const Real&, const SolveOptions&);
    std::size_t locate_step(const Real& s) const;
};

namespace detail {

// One adaptive Taylor leg from z0 with state y toward z0 + dir*|remaining|;
// appends steps; returns final state at z_target.
struct Integrator {
    const Params& par;
    Real tol;
    unsigned n;
    std::vector<Step>* out;
    Real* cons_err;

    // Advances (z, y) to z_target (or to the first stop trigger) and returns
    // the final state; z is updated to the position actually reached.
    std::array<Cplx, 5> run(Cplx& z, std::array<Cplx, 5> y, const Cplx& z_target,
                            bool real_chord,
                            const std::function<bool(const Cplx&, const std::array<Cplx, 5>&)>& stop
                            = nullptr) {
        Cplx dz = z_target - z;
        Real dist = abs(dz);
        if (dist == 0) return y;
        Cplx dir = dz / dist;
        Real traveled(0);
        std::vector<Cplx> a, b;
        std::size_t nsteps = 0;
        while (traveled < dist) {
            if (++nsteps > 500000) throw std::runtime_error("integrate: step limit exceeded");
            pii_taylor(z, y, n, a, b);
            Real h = step_size(a, b);
            bool last = false;
            if (traveled + h >= dist) { h = dist - traveled; last = true; }
            Cplx hc = dir * h;
            if (out) out->push_back(Step{z, hc, a, b, real_chord});
            std::array<Cplx, 5> ynew;
            ynew[0] = horner(a, hc);
            ynew[1] = horner_deriv(a, hc, 1);
            ynew[2] = horner_deriv(a, hc, 2);
            ynew[3] = horner(b, hc);
            ynew[4] = horner_deriv(b, hc, 1);
            z = z + hc;
            y = ynew;
            traveled += h;
            if (real_chord && cons_err) {
                Cplx F = y[2] * y[2] +
                         (y[1] * (y[1] * y[1] - z * y[1] + y[0])) * Real(4) -
                         Cplx{4 * par.alpha * par.alpha, Real(0)};
                *cons_err = std::max(*cons_err, Real(abs(F)));
            }
            if (stop && !last && stop(z, y)) break;
        }
        // land exactly on the target so callers can compare z against it
        if (traveled >= dist) z = z_target;
        return y;
    }

    Real step_size(const std::vector<Cplx>& a, const std::vector<Cplx>& b) const {
        Real h("1e9");
        Real sc_a = std::max(Real(1), Real(abs(a[0])));
        Real sc_b = abs(b[0]);
        if (sc_b == 0) sc_b = Real(1);
        for (unsigned k = n - 1; k <= n; ++k) {
            Real ma = abs(a[k]);
            if (ma > 0) h = std::min(h, Real(pow(tol * sc_a / ma, Real(1) / static_cast<int>(k))));
            Real mb = abs(b[std::min<std::size_t>(k, b.size() - 1)]);
            if (mb > 0) h = std::min(h, Real(pow(tol * sc_b / mb, Real(1) / static_cast<int>(k))));
        }
        return std::min(Real(h * Real("0.8")), Real(2));
    }
};

// Locate real zeros of f (poles of w) by sign changes over real chords.
inline void scan_f_zeros(const std::vector<Step>& steps, std::vector<Real>& zeros) {
    for (const Step& st : steps) {
        if (!st.real_chord) continue;
        Real f0v = st.b[0].re;
        Real f1v = horner(st.b, st.h).re;
        if (f0v == 0) { zeros.push_back(st.z0.re); continue; }
        if (f0v * f1v < 0) {
            // bisection + Newton on the step polynomial
            Real lo(0), hi = st.h.re;
            if (lo > hi) std::swap(lo, hi);
            Real flo = horner(st.b, Cplx(lo)).re;
            for (int it = 0; it < 8; ++it) {
                Real mid = (lo + hi) / 2;
                Real fm = horner(st.b, Cplx(mid)).re;
                if (flo * fm <= 0) hi = mid; else { lo = mid; flo = fm; }
            }
            Real t = (lo + hi) / 2;
            for (int it = 0; it < 64; ++it) {
                Real ft = horner(st.b, Cplx(t)).re;
                Real dft = horner_deriv(st.b, Cplx(t), 1).re;
                Real dt = ft / dft;
                t -= dt;
                if (abs(dt) < eps() * (1 + abs(t)) * 4) break;
            }
            zeros.push_back(st.z0.re + t);
        }
    }
    std::sort(zeros.begin(), zeros.end());
}

// Integrate along the real axis to s_target, passing any real pole of sigma
// through the upper half plane on a semicircle of radius r.  Pole positions
// are appended to pole_list (if given); the relative imaginary residue after
// each detour is folded into *imag_err.  z is updated to the point reached.
inline std::array<Cplx, 5> run_with_detours(Integrator& ig, Cplx& z, std::array<Cplx, 5> y,
                                            const Real& s_target, const Real& r,
                                            std::vector<Real>* pole_list, Real* imag_err) {
    Real dir = (s_target >= z.re) ? Real(1) : Real(-1);
    // a pole triggers the guard when |sigma| exceeds this scale
    auto near_pole = [](const Cplx& zz, const std::array<Cplx, 5>& yy) {
        return abs(yy[0]) > 1000 * (1 + abs(zz) * abs(zz));
    };
    int guard_hits = 0;
    while (dir * (s_target - z.re) > 0) {
        y = ig.run(z, y, Cplx(s_target), true, near_pole);
        if (dir * (s_target - z.re) <= 0) break;
        // pole ahead: Newton estimate s* = s + sigma/sigma'
        if (++guard_hits > 4096) throw std::runtime_error("solve: too many poles");
        Cplx corr = y[0] / y[1];
        Real s_star = z.re + corr.re;
        if (pole_list) pole_list->push_back(s_star);
        // entry is on the side we came from, exit on the far side
        Real entry = s_star - dir * r;
        Real exit = s_star + dir * r;
        // hop to the entry point along the real axis (short, pole-free)
        y = ig.run(z, y, Cplx(entry), true);
        // semicircle through the upper half plane in short chords
        const int m = 12;
        for (int j = 1; j <= m; ++j) {
            Real th0 = (dir < 0) ? Real(0) : pi();
            Real th = th0 + (dir < 0 ? Real(1) : Real(-1)) * pi() * j / m;
            Cplx znext = Cplx(s_star) + Cplx{r * cos(th), r * sin(th)};
            y = ig.run(z, y, znext, false);
        }
        // re-landed at exit: discard the (order of rounding) imaginary parts
        if (imag_err) {
            Real imax(0);
            for (auto& v : y) imax = std::max(imax, Real(abs(v.im)));
            *imag_err = std::max(*imag_err, Real(imax / std::max(Real(1), Real(abs(y[0])))));
        }
        for (auto& v : y) v = Cplx{v.re, Real(0)};
        z = Cplx(exit);
    }
    return y;
}

// Two-sided construction of the omega = 0 trajectory.
//
// The right series remainder at optimal truncation is itself of the size of
// the exponentially small correction (times a slowly growing factor), and it
// points along that correction: one-sided shooting therefore lands on a
// neighboring member of the solution family, with O(1) errors by the time
// the trajectory reaches s ~ 0.  The cure is to leave the correction
// amplitudes free on both sides,
//   right seed at s0:  power series + (kappa + c_plus) * delta(s),
//   left  seed at -t0: left series + c_minus * delta_left(t),
// and solve the two matching conditions (sigma, sigma') at a junction
// s_mid by Newton iteration.  The junction sits at moderately positive s:
// there both correction modes are still exponentially small, so the system
// is affine to high accuracy and the probe trajectories stay close to the
// true one (no spurious poles), while the conditioning toward either seed
// remains exponentially favorable.  f is normalized at the right seed,
// integrated down to the junction, and rebuilt across the stored left
// steps by solving
// the two-point problem on each step polynomial (stable: on the left the f
// equation has power-like solutions, so no exponential contamination).
inline Trajectory solve_matched(const Params& p, const Real& s_end_in, const SolveOptions& opt) {
    unsigned ambient = prec::get_bits();
    double target_exp = opt.target_digits * 2.302585092994046;
    // seed points: far enough that the post-matching (two-instanton) floors
    // sit below the accuracy target; the left seed must also cover s_end
    double T = std::max(0.0, -static_cast<double>(s_end_in));
    double t0d = std::max({T + 4.0, std::pow(target_exp / 0.9428, 2.0 / 3.0), 14.0});
    double s0d;
    if (opt.s_seed != 0) {
        s0d = static_cast<double>(opt.s_seed);
    } else {
        s0d = std::max(16.0, std::pow(0.375 * target_exp, 2.0 / 3.0) + 1.0);
        if (static_cast<double>(s_end_in) > s0d - 2) s0d = static_cast<double>(s_end_in) + 2;
    }
    // roundoff injected near a seed is amplified toward s = 0 by the
    // dominant/subdominant ratio of that side's linearized modes
    double amp = std::max(4.0 / 3.0 * std::pow(s0d, 1.5), 0.9428090415820634 * std::pow(t0d, 1.5));
    unsigned bits = std::max<unsigned>(ambient,
                                       static_cast<unsigned>((amp + target_exp) / 0.6931471805599453) + 96);
    prec::ScopedPrecision sp(bits);
    Real s0 = (opt.s_seed != 0) ? at_current_prec(opt.s_seed) : Real(s0d);
    Real t0(t0d);
    Real tol = at_current_prec(opt.tol);
    if (tol == 0) tol = pow(Real(2), -static_cast<int>(bits) + 8);
    unsigned order = opt.order ? opt.order : std::max(24u, bits / 5);

    Trajectory tr(p);
    tr.matched = true;
    tr.s_seed = s0;
    tr.s_end = s_end_in;
    tr.detour_radius_ = opt.detour_radius;

    // The junction sits at small positive s: the truncation remainders of
    // either seed, transported to the junction, stay O(1) there (further out
    // one side's remainder is amplified beyond control), so the initial
    // probes remain finite.  Probe trajectories may still pass near real
    // poles of deviated solutions; they detour through the upper half plane.
    Real s_mid = Real(1) / 2;

    // amplitudes are expensive to locate (bisection stage below); reuse them
    // across runs with the same seed configuration
    static std::map<std::string, std::array<std::string, 3>> amp_cache;
    static std::mutex amp_mtx;
    std::string amp_key = p.alpha.str(40, std::ios_base::scientific) + "|" +
                          s0.str(25, std::ios_base::scientific) + "|" +
                          t0.str(25, std::ios_base::scientific) + "|" +
                          std::to_string(bits) + "|" + std::to_string(opt.target_digits);
    bool cache_hit = false;
    Real cp(0), cm(0), best(0);
    {
        std::lock_guard<std::mutex> lk(amp_mtx);
        auto it = amp_cache.find(amp_key);
        if (it != amp_cache.end()) {
            cache_hit = true;
            cp = at_current_prec(Real(it->second[0]));
            cm = at_current_prec(Real(it->second[1]));
            best = at_current_prec(Real(it->second[2]));
        }
    }
    Integrator probe{p, tol, order, nullptr, nullptr};
    auto right0 = [&](const Real& cp) {
        SigmaSeed ss = seed_sigma(p, s0, 0, 0, cp);
        std::array<Cplx, 5> y = {Cplx(ss.sigma), Cplx(ss.dsigma), Cplx(ss.d2sigma),
                                 Cplx(Real(1)), Cplx(Real(0))};
        Cplx z(s0);
        return run_with_detours(probe, z, y, s_mid, opt.detour_radius, nullptr, nullptr);
    };
    auto left0 = [&](const Real& cm) {
        SigmaSeed ss = seed_sigma_left(p.alpha, t0, cm);
        std::array<Cplx, 5> y = {Cplx(ss.sigma), Cplx(ss.dsigma), Cplx(ss.d2sigma),
                                 Cplx(Real(1)), Cplx(Real(0))};
        Cplx z = Cplx(Real(0) - t0);
        return run_with_detours(probe, z, y, s_mid, opt.detour_radius, nullptr, nullptr);
    };
    auto resid = [&](const Real& cp, const Real& cm) -> std::array<Real, 2> {
        auto yr = right0(cp);
        auto yl = left0(cm);
        return {yr[0].re - yl[0].re, yr[1].re - yl[1].re};
    };
    auto nrm = [](const std::array<Real, 2>& v) { return abs(v[0]) + abs(v[1]); };

    // ---- stage 1: bracket each amplitude by separatrix shooting ----------
    //
    // The truncation remainders of the seeds are O(1) multiples of the
    // respective correction modes, so the Newton iteration started from
    // (0, 0) sits outside its affine basin.  Both amplitudes are therefore
    // first located by bisection: the tronquee trajectory is a separatrix,
    // and the two neighboring solution families are distinguishable.
    auto near_pole = [](const Cplx& zz, const std::array<Cplx, 5>& yy) {
        return abs(yy[0]) > 1000 * (1 + abs(zz) * abs(zz));
    };
    Real sigma_far = seed_sigma_left(p.alpha, t0, Real(0)).sigma;
    // right amplitude: shoot toward -t0; above the separatrix sigma blows up
    // (pole family), below it drops into the bounded oscillatory family
    auto class_right = [&](const Real& cpv) -> int {
        SigmaSeed ss = seed_sigma(p, s0, 0, 0, cpv);
        std::array<Cplx, 5> y = {Cplx(ss.sigma), Cplx(ss.dsigma), Cplx(ss.d2sigma),
                                 Cplx(Real(1)), Cplx(Real(0))};
        Cplx z(s0);
        y = probe.run(z, y, Cplx(Real(0) - t0), true, near_pole);
        if (z.re > Real(0) - t0 + Real(1) / 1000) return 1; // pole before -t0
        return (y[0].re >= sigma_far) ? 1 : -1;
    };
    if (!cache_hit) {
        Real B(2000);
        int cl = class_right(-B), ch = class_right(B);
        while (cl == ch && B < Real(300000)) {
            B *= 8;
            cl = class_right(-B);
            ch = class_right(B);
        }
        if (cl == ch) throw std::runtime_error("solve: right amplitude not bracketed");
        Real lo = -B, hi = B;
        for (int it = 0; it < 60; ++it) {
            Real mid = (lo + hi) / 2;
            if (class_right(mid) == cl) lo = mid; else hi = mid;
        }
        cp = (lo + hi) / 2;
#ifdef PII_MATCH_TRACE
        fprintf(stderr, "[match] bisect cp=%s\n", cp.str(10, std::ios_base::scientific).c_str());
#endif
        // reference trajectory for the left classifier: the sharpened right leg
        // is accurate down to s ~ -9 (the residual amplitude error is amplified
        // leftward but stays far below the classification threshold there)
        std::vector<Step> ref_steps;
        {
            Integrator igr{p, tol, order, &ref_steps, nullptr};
            SigmaSeed ss = seed_sigma(p, s0, 0, 0, cp);
            std::array<Cplx, 5> y = {Cplx(ss.sigma), Cplx(ss.dsigma), Cplx(ss.d2sigma),
                                     Cplx(Real(1)), Cplx(Real(0))};
            Cplx z(s0);
            igr.run(z, y, Cplx(Real(-9)), true);
        }
        auto sigma_ref = [&](const Real& s) -> Real {
            if (s < Real(-9) + Real(1) / 2) return seed_sigma_left(p.alpha, -s, Real(0)).sigma;
            for (const Step& st : ref_steps) {
                Real x0 = st.z0.re, x1 = x0 + st.h.re;
                if ((s - x0) * (s - x1) <= 0) return horner(st.a, Cplx(s) - st.z0).re;
            }
            throw std::runtime_error("solve: left classifier reference miss");
        };
        // left amplitude: walk toward the junction in short segments and classify
        // by the sign of the first O(1) deviation from the reference (the
        // decaying-mode deviation grows monotonically toward the junction; short
        // segments catch it before the trajectory can run into a pole)
        auto class_left = [&](const Real& cmv) -> int {
            SigmaSeed sl = seed_sigma_left(p.alpha, t0, cmv);
            std::array<Cplx, 5> y = {Cplx(sl.sigma), Cplx(sl.dsigma), Cplx(sl.d2sigma),
                                     Cplx(Real(1)), Cplx(Real(0))};
            Cplx z = Cplx(Real(0) - t0);
            Real last_dev(0);
            while (true) {
                Real sk = std::min(Real(z.re + Real(1) / 2), s_mid);
                y = probe.run(z, y, Cplx(sk), true, near_pole);
                if (z.re < sk - Real(1) / 1000)
                    return (last_dev >= 0) ? 1 : -1; // pole: fall back to last sign
                Real dev = y[0].re - sigma_ref(sk);
                if (abs(dev) > Real(1) / 20) return (dev > 0) ? 1 : -1;
                last_dev = dev;
                if (sk == s_mid) return (dev >= 0) ? 1 : -1;
            }
        };
        {
            Real B(64);
            int cl = class_left(-B), ch = class_left(B);
            while (cl == ch && B < Real(300000)) {
                B *= 8;
                cl = class_left(-B);
                ch = class_left(B);
            }
            if (cl == ch) throw std::runtime_error("solve: left amplitude not bracketed");
            Real lo = -B, hi = B;
            for (int it = 0; it < 48; ++it) {
                Real mid = (lo + hi) / 2;
                if (class_left(mid) == cl) lo = mid; else hi = mid;
            }
            cm = (lo + hi) / 2;
        }
#ifdef PII_MATCH_TRACE
        fprintf(stderr, "[match] bisect cm=%s\n", cm.str(10, std::ios_base::scientific).c_str());
#endif

        // ---- stage 2: Newton polish of the junction match ---------------------
        auto R = resid(cp, cm);
        best = nrm(R);
        Real bcp = cp, bcm = cm;
#ifdef PII_MATCH_TRACE
        fprintf(stderr, "[match] R0=%s\n", best.str(6, std::ios_base::scientific).c_str());
#endif
        Real goal = pow(Real(10), -static_cast<int>(opt.target_digits) - 8);
        // finite-difference Jacobian.  The probe step must keep the junction
        // deviation small (the transported state is strongly nonlinear in
        // O(1) amplitude changes there), so it is scaled well below the
        // bisection bracket while staying far above the integration floor.
        Real J00, J01, J10, J11, det;
        auto refresh_jac = [&]() {
            Real hp = std::max(Real(1), Real(abs(cp))) / 1000000;
            Real hm = std::max(Real(1), Real(abs(cm))) / 1000000;
            auto Rp = resid(cp + hp, cm);
            auto Rm = resid(cp, cm + hm);
            J00 = (Rp[0] - R[0]) / hp;
            J01 = (Rm[0] - R[0]) / hm;
            J10 = (Rp[1] - R[1]) / hp;
            J11 = (Rm[1] - R[1]) / hm;
            det = J00 * J11 - J01 * J10;
            if (det == 0) throw std::runtime_error("solve: degenerate matching system");
        };
        refresh_jac();
        bool fresh = true;
        for (int it = 0; it < 60 && best > goal; ++it) {
            Real dcp = (R[0] * J11 - R[1] * J01) / det;
            Real dcm = (J00 * R[1] - J10 * R[0]) / det;
            Real lam(1);
            std::array<Real, 2> Rn;
            int bt = 0;
            for (; bt < 12; ++bt) {
                Rn = resid(cp - lam * dcp, cm - lam * dcm);
                if (nrm(Rn) < best) break;
                lam /= 2;
            }
            if (bt == 12) {
                if (fresh) break; // converged to the floor
                refresh_jac();
                fresh = true;
                continue;
            }
            cp -= lam * dcp;
            cm -= lam * dcm;
            R = Rn;
            best = nrm(R);
            bcp = cp;
            bcm = cm;
#ifdef PII_MATCH_TRACE
            fprintf(stderr, "[match] it=%d lam=%s R=%s cp=%s cm=%s\n", it,
                    lam.str(3, std::ios_base::scientific).c_str(),
                    best.str(6, std::ios_base::scientific).c_str(),
                    cp.str(8, std::ios_base::scientific).c_str(),
                    cm.str(8, std::ios_base::scientific).c_str());
#endif
            if (lam < 1) {
                refresh_jac();
                fresh = true;
            } else {
                fresh = false;
            }
        }
        cp = bcp;
        cm = bcm;

        {
            std::lock_guard<std::mutex> lk(amp_mtx);
            amp_cache[amp_key] = {cp.str(0, std::ios_base::scientific),
                                  cm.str(0, std::ios_base::scientific),
                                  best.str(0, std::ios_base::scientific)};
        }
    }
    tr.c_plus = cp;
    tr.c_minus = cm;
    tr.match_resid = best;

    // final right leg with the physical normalization of f
    Integrator ig{p, tol, order, &tr.steps, &tr.cons_err};
    SigmaSeed ss = seed_sigma(p, s0, 0, 0, cp);
    LogfSeed lf = seed_logf(p, s0);
    tr.seed_err = ss.err + lf.err;
    Real f0 = exp(lf.logf);
    std::array<Cplx, 5> y = {Cplx(ss.sigma), Cplx(ss.dsigma), Cplx(ss.d2sigma),
                             Cplx(f0), Cplx(f0 * lf.w)};
    Cplx zr(s0);
    y = ig.run(zr, y, Cplx(s_mid), true);
    Cplx f1 = y[3], df1 = y[4];
    // final left leg (sigma; f rebuilt below)
    std::size_t left_begin = tr.steps.size();
    SigmaSeed sl = seed_sigma_left(p.alpha, t0, cm);
    tr.seed_err = std::max(tr.seed_err, sl.err);
    std::array<Cplx, 5> yl = {Cplx(sl.sigma), Cplx(sl.dsigma), Cplx(sl.d2sigma),
                              Cplx(Real(1)), Cplx(Real(0))};
    Cplx zl = Cplx(Real(0) - t0);
    ig.run(zl, yl, Cplx(s_mid), true);
    // rebuild f across the left steps, right to left, continuing (f, f')
    // from the junction
    for (std::size_t i = tr.steps.size(); i-- > left_begin;) {
        Step& st = tr.steps[i];
        std::size_t na = st.a.size() - 1;
        std::vector<Cplx> B0, B1;
        f_taylor(st.z0, st.a, na, Cplx{Real(1), Real(0)}, Cplx{Real(0), Real(0)}, B0);
        f_taylor(st.z0, st.a, na, Cplx{Real(0), Real(0)}, Cplx{Real(1), Real(0)}, B1);
        Cplx v00 = horner(B0, st.h), v01 = horner(B1, st.h);
        Cplx v10 = horner_deriv(B0, st.h, 1), v11 = horner_deriv(B1, st.h, 1);
        Cplx dd = v00 * v11 - v01 * v10;
        Cplx b0 = (f1 * v11 - df1 * v01) / dd;
        Cplx b1 = (v00 * df1 - v10 * f1) / dd;
        st.b.resize(B0.size());
        for (std::size_t k = 0; k < B0.size(); ++k) st.b[k] = b0 * B0[k] + b1 * B1[k];
        f1 = b0;
        df1 = b1;
    }
    scan_f_zeros(tr.steps, tr.f_zeros);
    return tr;
}

// Smooth remainder of the optimally truncated right series at s0, expressed
// as an amplitude of the exponentially small correction.  It depends on
// alpha and the truncation point only (not on omega), so it is computed once
// by an omega = 0 matching run and cached.
inline Real calibrated_extra_amp(const Real& alpha, const Real& s0, unsigned target_digits) {
    static std::map<std::string, std::string> cache;
    static std::mutex mtx;
    std::string key = alpha.str(40, std::ios_base::scientific) + "|" +
                      s0.str(25, std::ios_base::scientific) + "|" + std::to_string(target_digits);
    {
        std::lock_guard<std::mutex> lk(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return at_current_prec(Real(it->second));
    }
    Params p0(alpha, Real(0));
    SolveOptions o;
    o.s_seed = s0;
    o.target_digits = target_digits;
    Trajectory t = solve_matched(p0, Real(0), o);
    std::string val = t.c_plus.str(0, std::ios_base::scientific);
    {
        std::lock_guard<std::mutex> lk(mtx);
        cache[key] = val;
    }
    return at_current_prec(Real(val));
}

} // namespace detail

// Construct the tronquee trajectory covering [s_end, s_seed] (or the
// enclosing matched range).  For omega = 0 a two-sided matched construction
// is used; for omega > 0 the trajectory is integrated from a right series
// seed whose correction amplitude is fixed by an omega = 0 calibration run,
// and real poles of H are passed through the upper half plane with their
// positions recorded.
inline Trajectory solve(const Params& p, const Real& s_end_in, const SolveOptions& opt = {}) {
    if (p.omega == 0) return detail::solve_matched(p, s_end_in, opt);
    unsigned ambient = prec::get_bits();
    double target_exp = opt.target_digits * 2.302585092994046;
    unsigned bits = std::max<unsigned>(ambient,
                                       static_cast<unsigned>(target_exp / 0.6931471805599453) + 64);
    prec::ScopedPrecision sp(bits);
    Trajectory tr(p);
    Real s_seed = at_current_prec(opt.s_seed);
    if (s_seed == 0) {
        double s0d = std::max(16.0, std::pow(0.375 * target_exp, 2.0 / 3.0) + 1.0);
        if (static_cast<double>(s_end_in) > s0d - 2) s0d = static_cast<double>(s_end_in) + 2;
        s_seed = Real(s0d);
    }
    Real cplus(0);
    if (p.alpha != 0)
        cplus = detail::calibrated_extra_amp(p.alpha, s_seed, opt.target_digits);
    Real tol = at_current_prec(opt.tol);
    if (tol == 0) tol = pow(Real(2), -static_cast<int>(bits) + 8);
    unsigned order = opt.order ? opt.order : std::max(24u, bits / 5);
    tr.s_seed = s_seed;
    tr.s_end = s_end_in;
    tr.detour_radius_ = opt.detour_radius;
    tr.c_plus = cplus;

    SigmaSeed ss = seed_sigma(p, s_seed, 0, 0, cplus);
    LogfSeed lf = seed_logf(p, s_seed);
    tr.seed_err = ss.err + lf.err;
    Real f0 = exp(lf.logf);
    std::array<Cplx, 5> y = {Cplx(ss.sigma), Cplx(ss.dsigma), Cplx(ss.d2sigma),
                             Cplx(f0), Cplx(f0 * lf.w)};

    detail::Integrator ig{p, tol, order, &tr.steps, &tr.cons_err};
    Cplx z(s_seed);
    detail::run_with_detours(ig, z, y, s_end_in, opt.detour_radius,
                             &tr.sigma_poles, &tr.detour_imag_err);

    detail::scan_f_zeros(tr.steps, tr.f_zeros);
    std::sort(tr.sigma_poles.begin(), tr.sigma_poles.end());
    return tr;
}

inline std::size_t Trajectory::locate_step(const Real& s) const {
    // steps are ordered along the path; find a real chord containing s
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!steps[i].real_chord) continue;
        Real x0 = steps[i].z0.re, x1 = x0 + steps[i].h.re;
        if ((s - x0) * (s - x1) <= 0) return i;
    }
    return steps.size();
}

inline PIIState Trajectory::eval(const Real& s) const {
    std::array<Cplx, 5> y;
    std::size_t i = locate_step(s);
    if (i < steps.size()) {
        Cplx h = Cplx(s) - steps[i].z0;
        y[0] = detail::horner(steps[i].a, h);
        y[1] = detail::horner_deriv(steps[i].a, h, 1);
        y[2] = detail::horner_deriv(steps[i].a, h, 2);
        y[3] = detail::horner(steps[i].b, h);
        y[4] = detail::horner_deriv(steps[i].b, h, 1);
    } else {
        // under a detour: fresh integration from the nearest real endpoint
        Real best(0);
        bool found = false;
        Cplx zb;
        std::array<Cplx, 5> yb;
        for (const Step& st : steps) {
            if (!st.real_chord) continue;
            for (int e = 0; e < 2; ++e) {
                Cplx ze = (e == 0) ? st.z0 : Cplx(st.z0 + st.h);
                Real d = abs(ze.re - s);
                if (!found || d < best) {
                    best = d;
                    found = true;
                    zb = ze;
                    if (e == 0) {
                        yb = {st.a[0], st.a.size() > 1 ? st.a[1] : Cplx(Real(0)),
                              st.a.size() > 2 ? st.a[2] * Real(2) : Cplx(Real(0)),
                              st.b[0], st.b.size() > 1 ? st.b[1] : Cplx(Real(0))};
                    } else {
                        yb[0] = detail::horner(st.a, st.h);
                        yb[1] = detail::horner_deriv(st.a, st.h, 1);
                        yb[2] = detail::horner_deriv(st.a, st.h, 2);
                        yb[3] = detail::horner(st.b, st.h);
                        yb[4] = detail::horner_deriv(st.b, st.h, 1);
                    }
                }
            }
        }
        if (!found) throw std::out_of_range("eval: point outside integrated range");
        detail::Integrator ig{par, pow(Real(2), -static_cast<int>(prec::get_bits()) + 8),
                              30, nullptr, nullptr};
        y = ig.run(zb, yb, Cplx(s), true);
    }
    PIIState st;
    st.s = s;
    st.sigma = y[0].re;
    st.dsigma = y[1].re;
    st.d2sigma = y[2].re;
    st.f = y[3].re;
    st.df = y[4].re;
    st.u = -st.dsigma;
    st.H = st.sigma;
    st.w_finite = (st.f != 0);
    st.w = st.w_finite ? Real(st.df / st.f) : Real(0);
    return st;
}

inline Real Trajectory::integral_sigma(const Real& a, const Real& b) const {
    if (a == b) return Real(0);
    if (in_detour(a) || in_detour(b))
        throw std::invalid_argument("integral_sigma: endpoint too close to a pole of H");
    Real lo = std::min(a, b), hi = std::max(a, b);
    // Contour: lo -> hi along the real axis, replaced by the recorded upper
    // semicircles around each enclosed pole of H.  The real part of the
    // contour integral is the principal value (the arcs contribute
    // -i pi Res each, which is purely imaginary for the residue-1 poles).
    Real real_part(0);
    Cplx arc_total{Real(0), Real(0)};
    for (const Step& st : steps) {
        if (st.real_chord) {
            Real x0 = st.z0.re, x1 = x0 + st.h.re;
            Real slo = std::min(x0, x1), shi = std::max(x0, x1);
            Real clo = std::max(lo, slo), chi = std::min(hi, shi);
            if (clo >= chi) continue;
            auto anti = [&](const Real& x) {
                Cplx h = Cplx(x) - st.z0;
                Cplx v{Real(0), Real(0)};
                for (std::size_t k = st.a.size(); k-- > 0;)
                    v = v * h + st.a[k] * (Real(1) / Real(static_cast<long>(k + 1)));
                return v * h;
            };
            real_part += (anti(chi) - anti(clo)).re;
        } else {
            // arc chord belongs to the pole nearest its midpoint; include it
            // iff the whole detour circle lies inside [lo, hi]
            Real midre = st.z0.re + st.h.re / 2;
            Real center(0), bestd(0);
            bool fnd = false;
            for (const Real& pp : sigma_poles) {
                Real d = abs(pp - midre);
                if (!fnd || d < bestd) { bestd = d; fnd = true; center = pp; }
            }
            if (!fnd || center - detour_radius_ < lo || center + detour_radius_ > hi)
                continue;
            Cplx v{Real(0), Real(0)};
            for (std::size_t k = st.a.size(); k-- > 0;)
                v = v * st.h + st.a[k] * (Real(1) / Real(static_cast<long>(k + 1)));
            arc_total += v * st.h;
        }
    }
    // arcs were traversed in the path direction; flip to increasing s if the
    // solve ran downward
    Real value = real_part + ((s_end >= s_seed) ? arc_total.re : -arc_total.re);
    if (a > b) value = -value;
    return value;
}

} // namespace pii
