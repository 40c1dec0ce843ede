#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "entrostat/errors.hpp"

namespace entrostat {

// Probability-vector tolerance used everywhere a trace or a positivity
// condition is enforced (single repo-wide constant).
inline constexpr double kProbTol = 1e-12;

// Thermodynamic identity tolerance (beta*f = beta*u - s).
inline constexpr double kThermoTol = 1e-10;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Brent's method on a bracketing interval [a,b] with f(a)*f(b) <= 0.
// Throws ConvergenceError if the residual tolerance is not met within
// max_iter iterations, BracketError if the interval does not bracket.
inline double brent(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-13, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw BracketError("brent: interval does not bracket a root");
    if (std::abs(fa) < std::abs(fb)) { std::swap(a, b); std::swap(fa, fb); }
    double c = a, fc = fa, s = b, fs = fb, d = 0.0;
    bool mflag = true;
    for (int it = 0; it < max_iter; ++it) {
        if (fb == 0.0 || std::abs(b - a) < tol) return b;
        if (fa != fc && fb != fc) {
            s = a * fb * fc / ((fa - fb) * (fa - fc)) +
                b * fa * fc / ((fb - fa) * (fb - fc)) +
                c * fa * fb / ((fc - fa) * (fc - fb));
        } else {
            s = b - fb * (b - a) / (fb - fa);
        }
        const double lo = (3.0 * a + b) / 4.0;
        const bool cond = !((s > std::min(lo, b) && s < std::max(lo, b))) ||
                          (mflag && std::abs(s - b) >= std::abs(b - c) / 2.0) ||
                          (!mflag && std::abs(s - b) >= std::abs(c - d) / 2.0) ||
                          (mflag && std::abs(b - c) < tol) ||
                          (!mflag && std::abs(c - d) < tol);
        if (cond) { s = 0.5 * (a + b); mflag = true; } else { mflag = false; }
        fs = f(s);
        d = c; c = b; fc = fb;
        if (fa * fs < 0.0) { b = s; fb = fs; } else { a = s; fa = fs; }
        if (std::abs(fa) < std::abs(fb)) { std::swap(a, b); std::swap(fa, fb); }
    }
    if (std::abs(fb) < 1e-9) return b;
    throw ConvergenceError("brent: no convergence within iteration budget");
}

// Adaptive Simpson quadrature for integrands that are finite on [a,b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-10, int depth = 24) {
    struct Impl {
        const std::function<double(double)>& f;
        double run(double a, double fa, double b, double fb, double m, double fm,
                   double whole, double tol, int depth) const {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
                return left + right + (left + right - whole) / 15.0;
            return run(a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
                   run(m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
        }
    } impl{f};
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return impl.run(a, fa, b, fb, m, fm, whole, tol, depth);
}

// Gauss-Chebyshev rule: integral over [-1,1] of h(x)/sqrt(1-x^2) dx.
// Exact for polynomial h of degree < 2*nodes.
inline double gauss_chebyshev(const std::function<double(double)>& h, int nodes = 64) {
    double acc = 0.0;
    for (int k = 1; k <= nodes; ++k) {
        const double x = std::cos(kPi * (2.0 * k - 1.0) / (2.0 * nodes));
        acc += h(x);
    }
    return acc * kPi / nodes;
}

}  // namespace entrostat
