#include "entrostat/coulomb.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "entrostat/analytic.hpp"

namespace entrostat::coulomb {

namespace {

constexpr double kWall = 1e-14;   // frozen hard-wall value
constexpr double kMinGap = 1e-14;

double pack_beta_f(const std::vector<double>& lam, double beta, int n) {
    double quad = 0.0;
    for (double v : lam) quad += v * v;
    double logsum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double gap = std::abs(lam[i] - lam[j]);
            logsum += std::log(std::max(gap, 1e-300));
        }
    return beta * quad - 2.0 / (static_cast<double>(n) * n) * logsum;
}

std::vector<double> gradient(const std::vector<double>& lam, double beta, int n) {
    std::vector<double> g(n);
    const double c = 2.0 / (static_cast<double>(n) * n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) acc += 1.0 / (lam[i] - lam[j]);
        g[i] = 2.0 * beta * lam[i] - c * acc;
    }
    return g;
}

Eigen::MatrixXd hessian(const std::vector<double>& lam, double beta, int n) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    const double c = 2.0 / (static_cast<double>(n) * n);
    for (int i = 0; i < n; ++i) h(i, i) = 2.0 * beta;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i) {
                const double d = lam[i] - lam[j];
                const double w = c / (d * d);
                h(i, i) += w;
                h(i, j) -= w;
            }
    return h;
}

struct Workspace {
    std::vector<double> lam;
    std::vector<bool> free_;
    std::vector<bool> pinned;  // equality-fixed coordinates, never released
    int n;
    double beta;
    double cap = -1.0;      // optional upper bound on free coordinates
    int n_free() const {
        int k = 0;
        for (bool f : free_) k += f;
        return k;
    }
};

// Solve the equality-constrained Newton system on the free set; returns the
// step (zero on frozen coordinates) or an empty vector on failure.
std::vector<double> newton_step(const Workspace& w, const std::vector<double>& g,
                                double shift) {
    std::vector<int> idx;
    for (int i = 0; i < w.n; ++i)
        if (w.free_[i]) idx.push_back(i);
    const int m = static_cast<int>(idx.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::VectorXd b(m + 1);
    const Eigen::MatrixXd h = hessian(w.lam, w.beta, w.n);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) a(r, c) = h(idx[r], idx[c]);
        a(r, r) += shift;
        a(r, m) = 1.0;
        a(m, r) = 1.0;
        b(r) = -g[idx[r]];
    }
    b(m) = 0.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) return {};
    const Eigen::VectorXd x = lu.solve(b);
    std::vector<double> p(w.n, 0.0);
    for (int r = 0; r < m; ++r) p[idx[r]] = x(r);
    return p;
}

double kkt_residual(const Workspace& w, const std::vector<double>& g, double* nu_out) {
    double nu = 0.0;
    int m = 0;
    for (int i = 0; i < w.n; ++i)
        if (w.free_[i]) {
            nu += g[i];
            ++m;
        }
    nu /= m;
    if (nu_out) *nu_out = nu;
    double acc = 0.0;
    for (int i = 0; i < w.n; ++i)
        if (w.free_[i]) acc += (g[i] - nu) * (g[i] - nu);
    return std::sqrt(acc);
}

MinimizationResult minimize_impl(Workspace w, MinimizeOptions opt) {
    const bool trace_on = std::getenv("ENTROSTAT_MIN_TRACE") != nullptr;
    double f = pack_beta_f(w.lam, w.beta, w.n);
    double gn = 0.0;
    int it = 0;
    bool converged = false;
    for (; it < opt.max_iter; ++it) {
        std::vector<double> g = gradient(w.lam, w.beta, w.n);
        double nu;
        gn = kkt_residual(w, g, &nu);
        // Release wall coordinates whose multiplier turned inconsistent
        // (pinned coordinates carry an equality constraint and stay put).
        bool released = false;
        for (int i = 0; i < w.n; ++i)
            if (!w.free_[i] && !w.pinned.empty() && !w.pinned[i] && g[i] - nu < -1e-10) {
                w.free_[i] = true;
                released = true;
            }
        if (released) {
            gn = kkt_residual(w, g, &nu);
        } else if (gn < opt.tol) {
            converged = true;
            break;
        }
        double shift = 0.0;
        std::vector<double> p;
        double slope = 0.0;
        for (int tries = 0; tries < 60; ++tries) {
            p = newton_step(w, g, shift);
            if (!p.empty()) {
                slope = 0.0;
                for (int i = 0; i < w.n; ++i) slope += p[i] * g[i];
                if (slope < 0.0) break;
            }
            shift = shift == 0.0 ? 1e-8 : shift * 10.0;
            p.clear();
        }
        if (p.empty()) break;
        // Fraction-to-boundary clipping for positivity (and the cap, if set).
        double s = 1.0;
        for (int i = 0; i < w.n; ++i) {
            if (!w.free_[i]) continue;
            if (p[i] < 0.0) s = std::min(s, -0.995 * w.lam[i] / p[i]);
            if (w.cap > 0.0 && p[i] > 0.0)
                s = std::min(s, 0.999999 * (w.cap - w.lam[i]) / p[i]);
        }
        // In the local Newton phase the objective changes below machine
        // precision while the residual still contracts quadratically, so the
        // Armijo test only applies while the residual is large.
        const bool local_phase = gn < 1e-3;
        bool accepted = false;
        for (int back = 0; back < 60 && s > 1e-18; ++back) {
            std::vector<double> cand = w.lam;
            for (int i = 0; i < w.n; ++i)
                if (w.free_[i]) cand[i] += s * p[i];
            bool feasible = true;
            for (int i = 0; i < w.n && feasible; ++i)
                if (w.free_[i] && cand[i] <= 0.0) feasible = false;
            if (feasible) {
                const double fn = pack_beta_f(cand, w.beta, w.n);
                if (fn < f + 1e-4 * s * slope ||
                    (local_phase && fn <= f + 1e-12 * (1.0 + std::abs(f)))) {
                    w.lam = std::move(cand);
                    f = fn;
                    accepted = true;
                    break;
                }
            }
            s *= 0.5;
        }
        // Freeze coordinates driven into the wall with a consistent multiplier.
        std::vector<double> g2 = gradient(w.lam, w.beta, w.n);
        double nu2;
        kkt_residual(w, g2, &nu2);
        bool froze = false;
        for (int i = 0; i < w.n; ++i)
            if (w.free_[i] && w.lam[i] < 1e-12 && g2[i] - nu2 > 0.0 && w.n_free() > 2) {
                w.free_[i] = false;
                w.lam[i] = kWall;
                froze = true;
            }
        if (trace_on)
            std::fprintf(stderr,
                         "  min it=%d f=%.12f gn=%.3e shift=%.1e step=%.3e acc=%d froze=%d "
                         "nfree=%d\n",
                         it, f, gn, shift, s, static_cast<int>(accepted),
                         static_cast<int>(froze), w.n_free());
        if (!accepted && !froze) break;
        if (froze) f = pack_beta_f(w.lam, w.beta, w.n);
    }
    std::vector<double> vals = w.lam;
    double trace = 0.0;
    for (double v : vals) trace += v;
    for (double& v : vals) v /= trace;
    return {Spectrum(vals), f - std::log(static_cast<double>(w.n)), converged, it, gn};
}

}  // namespace

double finite_free_energy(const Spectrum& spec, double beta, int n) {
    if (static_cast<int>(spec.size()) != n)
        throw DomainError("finite_free_energy: spectrum length must equal n");
    const auto& v = spec.values();
    for (int i = 0; i < n; ++i) {
        if (v[i] <= 0.0) throw DegenerateError("finite_free_energy: nonpositive eigenvalue");
        for (int j = i + 1; j < n; ++j)
            if (std::abs(v[i] - v[j]) < kMinGap)
                throw DegenerateError("finite_free_energy: coincident eigenvalues");
    }
    return pack_beta_f(v, beta, n) - std::log(static_cast<double>(n));
}

std::vector<double> finite_free_energy_gradient(const std::vector<double>& lam,
                                                double beta, int n) {
    return gradient(lam, beta, n);
}

MinimizationResult minimize_free_energy(int n, double beta, const Spectrum& init,
                                        MinimizeOptions opt) {
    if (n < 2) throw DomainError("minimize_free_energy: n must be >= 2");
    if (static_cast<int>(init.size()) != n)
        throw DomainError("minimize_free_energy: init length must equal n");
    if (init.smallest() <= 0.0)
        throw DomainError("minimize_free_energy: init must be strictly interior");
    Workspace w{init.values(), std::vector<bool>(n, true), std::vector<bool>(n, false), n,
                beta};
    auto res = minimize_impl(std::move(w), opt);
    if (!res.converged)
        throw ConvergenceError("minimize_free_energy: no convergence within max_iter");
    return res;
}

Spectrum wishart_seed(int n) {
    // lambda_i proportional to quantiles of the beta = 0 Wishart law.
    std::vector<double> v(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double q = (i + 0.5) / n;
        const double x = brent(
            [q](double t) {
                const double r = std::sqrt(t / 4.0);
                return 2.0 / kPi * (std::asin(r) + r * std::sqrt(1.0 - t / 4.0)) - q;
            },
            1e-12, 4.0 - 1e-12, 1e-12, 200);
        v[i] = x;
        sum += x;
    }
    for (double& x : v) x /= sum;
    return Spectrum(v);
}

Spectrum separable_seed(int n, double mu) {
    if (mu <= 0.0 || mu >= 1.0) throw DomainError("separable_seed: mu outside (0,1)");
    const Spectrum sea = wishart_seed(n - 1);
    std::vector<double> v;
    v.reserve(n);
    for (double x : sea.values()) v.push_back(x * (1.0 - mu));
    v.push_back(mu);
    return Spectrum(v);
}

BasinPair minimize_both_basins(int n, double beta, MinimizeOptions opt) {
    const double mu0 = beta <= -2.0 ? analytic::evaporated_mu(beta) : 0.6;
    Workspace wt{wishart_seed(n).values(), std::vector<bool>(n, true),
                 std::vector<bool>(n, false), n, beta};
    Workspace ws{separable_seed(n, mu0).values(), std::vector<bool>(n, true),
                 std::vector<bool>(n, false), n, beta};
    return {minimize_impl(std::move(wt), opt), minimize_impl(std::move(ws), opt)};
}

std::vector<std::pair<double, double>> profile_fixed_max(int n, double beta,
                                                         const std::vector<double>& mu_grid,
                                                         MinimizeOptions opt) {
    std::vector<std::pair<double, double>> out;
    out.reserve(mu_grid.size());
    const Spectrum sea = wishart_seed(n - 1);
    for (double mu : mu_grid) {
        if (mu <= 1.0 / n || mu >= 1.0)
            throw DomainError("profile_fixed_max: mu outside (1/n, 1)");
        Workspace w;
        w.n = n;
        w.beta = beta;
        w.cap = mu;
        w.lam.resize(n);
        if (sea.largest() * (1.0 - mu) < 0.999 * mu) {
            for (int i = 0; i < n - 1; ++i) w.lam[i] = sea.values()[n - 2 - i] * (1.0 - mu);
        } else {
            // mu too small for the Wishart profile; use a distinct-valued ramp
            // around the uniform slice value, kept strictly below the cap.
            const double bar = (1.0 - mu) / (n - 1);
            const double eps = std::min(0.5, 0.9 * (mu / bar - 1.0));
            for (int i = 0; i < n - 1; ++i) {
                const double r = (2.0 * i - (n - 2.0)) / std::max(1.0, n - 2.0);
                w.lam[i] = bar * (1.0 + eps * r);
            }
        }
        w.lam[n - 1] = mu;
        w.free_.assign(n, true);
        w.pinned.assign(n, false);
        w.free_[n - 1] = false;  // largest eigenvalue held fixed
        w.pinned[n - 1] = true;
        const auto res = minimize_impl(std::move(w), opt);
        out.emplace_back(mu, res.beta_f);
    }
    return out;
}

double locate_crossing(int n, double beta_lo, double beta_hi, double tol,
                       MinimizeOptions opt) {
    auto delta = [&](double beta) -> std::pair<double, bool> {
        const auto bp = minimize_both_basins(n, beta, opt);
        const bool two_basins =
            std::abs(bp.typical.spectrum.largest() - bp.separable.spectrum.largest()) > 0.15;
        return {bp.typical.beta_f - bp.separable.beta_f, two_basins};
    };
    auto [dlo, basins_lo] = delta(beta_lo);
    auto [dhi, basins_hi] = delta(beta_hi);
    if (!basins_lo || !basins_hi)
        throw BracketError("locate_crossing: two-basin structure absent at an endpoint");
    if (dlo * dhi > 0.0)
        throw BracketError("locate_crossing: free-energy difference does not change sign");
    double lo = beta_lo, hi = beta_hi;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const auto [dm, ok] = delta(mid);
        (void)ok;
        if (std::abs(dm) < tol && std::abs(hi - lo) < 1e-3) return mid;
        if ((dm > 0.0) == (dlo > 0.0)) {
            lo = mid;
            dlo = dm;
        } else {
            hi = mid;
        }
        if (std::abs(hi - lo) < 1e-10) return 0.5 * (lo + hi);
    }
    return 0.5 * (lo + hi);
}

std::vector<MaxEigenvalueRow> max_eigenvalue_curve(int n, const std::vector<double>& beta_grid,
                                                   MinimizeOptions opt) {
    std::vector<MaxEigenvalueRow> out;
    out.reserve(beta_grid.size());
    for (double beta : beta_grid) {
        const auto bp = minimize_both_basins(n, beta, opt);
        const bool typical_stable = bp.typical.beta_f <= bp.separable.beta_f;
        out.push_back({beta,
                       typical_stable ? bp.typical.spectrum.largest()
                                      : bp.separable.spectrum.largest(),
                       bp.typical.spectrum.largest(), bp.separable.spectrum.largest(),
                       bp.typical.beta_f, bp.separable.beta_f});
    }
    return out;
}

}  // namespace entrostat::coulomb
