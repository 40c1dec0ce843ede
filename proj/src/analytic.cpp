#include "entrostat/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace entrostat::analytic {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);
const double kBetaG = -2.0 / 27.0;
const double kBetaAsymSplit = -1.5 + kSqrt2;

double wishart_beta_of_delta(double d) { return 4.0 / (d * d * d) - 2.0 / (d * d); }
}  // namespace

BetaMinus solve_beta_minus() {
    static const BetaMinus cached = [] {
        auto f = [](double mu) { return mu / (2.0 * (1.0 - mu)) + std::log1p(-mu); };
        const double mu = brent(f, 0.5, 0.99, 1e-15, 200);
        if (std::abs(f(mu)) > 1e-12)
            throw ConvergenceError("solve_beta_minus: residual above 1e-12");
        return BetaMinus{mu, -1.0 / (2.0 * mu * (1.0 - mu))};
    }();
    return cached;
}

double gamma1(double delta, double beta, int sign) {
    return 1.0 + sign * (delta / 2.0) * (1.0 - beta * delta * delta / 2.0);
}

double gamma2(double delta, double beta, int sign) {
    double rad = -beta * (1.0 + beta * delta * delta / 2.0);
    if (rad < 0.0) {
        if (rad < -1e-10) throw DomainError("gamma2: level curve undefined here");
        rad = 0.0;
    }
    return 1.0 + sign * delta * delta * std::sqrt(rad);
}

double wishart_delta_stable(double beta) {
    if (beta < 0.0 || beta > 2.0) throw DomainError("wishart_delta_stable: beta outside [0,2]");
    if (beta == 2.0) return 1.0;
    if (beta == 0.0) return 2.0;
    // beta(delta) decreases from 2 to 0 on [1,2]
    return brent([beta](double d) { return wishart_beta_of_delta(d) - beta; }, 1.0, 2.0);
}

double wishart_delta_meta(double beta) {
    if (beta < kBetaG - 1e-15 || beta >= 0.0)
        throw DomainError("wishart_delta_meta: beta outside [-2/27,0)");
    if (beta <= kBetaG) return 3.0;
    // beta(delta) decreases from 0 to -2/27 on (2,3]
    return brent([beta](double d) { return wishart_beta_of_delta(d) - beta; }, 2.0, 3.0);
}

double asym_beta_of_delta(double delta, int sign) {
    const double rad = (2.0 + kSqrt2 - delta) * (delta - 2.0 + kSqrt2);
    if (rad < 0.0) throw DomainError("asym_beta_of_delta: delta outside (2-sqrt2, 2+sqrt2)");
    return -1.0 / (delta * delta) + sign * std::sqrt(rad) / (delta * delta * delta);
}

double asym_delta_upper(double beta) {
    if (beta < kBetaAsymSplit - 1e-15 || beta >= kBetaG)
        throw DomainError("asym_delta_upper: beta outside [-3/2+sqrt2, -2/27)");
    if (beta <= kBetaAsymSplit) return 2.0 + kSqrt2;
    // decreasing from -2/27 at delta=3 to -3/2+sqrt2 at delta=2+sqrt2
    return brent([beta](double d) { return asym_beta_of_delta(d, +1) - beta; }, 3.0, 2.0 + kSqrt2);
}

double asym_delta_lower(double beta) {
    if (beta <= -2.0 || beta >= kBetaAsymSplit)
        throw DomainError("asym_delta_lower: beta outside (-2, -3/2+sqrt2)");
    // increasing from -2 at delta=1 to -3/2+sqrt2 at delta=2+sqrt2
    return brent([beta](double d) { return asym_beta_of_delta(d, -1) - beta; }, 1.0,
                 2.0 + kSqrt2 - 1e-12);
}

double evaporated_mu(double beta) {
    if (beta > -2.0) throw DomainError("evaporated_mu: defined for beta <= -2");
    return 0.5 + 0.5 * std::sqrt(1.0 + 2.0 / beta);
}

FeasibleDomain feasible_domain(double beta) {
    FeasibleDomain dom;
    dom.beta = beta;
    if (beta >= 0.0) {
        dom.lower = [beta](double d) { return std::max(d, gamma1(d, beta, -1)); };
        dom.upper = [beta](double d) { return gamma1(d, beta, +1); };
        if (beta >= 2.0) {
            dom.delta_max = std::sqrt(2.0 / beta);
            dom.corner = std::make_pair(dom.delta_max, 1.0);
        } else {
            dom.delta_max = wishart_delta_stable(beta);
        }
        return dom;
    }
    // beta < 0: the upper/lower boundary switches from Gamma1 to Gamma2 at
    // delta = sqrt(-2/(3 beta)).
    const double dswitch = std::sqrt(-2.0 / (3.0 * beta));
    auto hpm = [beta, dswitch](double d, int sign) {
        return d <= dswitch ? gamma1(d, beta, sign) : gamma2(d, beta, sign);
    };
    dom.lower = [hpm](double d) { return std::max(d, hpm(d, -1)); };
    dom.upper = [hpm](double d) { return hpm(d, +1); };
    if (beta <= -2.0) {
        dom.delta_max = std::sqrt(-2.0 / beta);
        dom.corner = std::make_pair(dom.delta_max, 1.0);
    } else if (beta >= kBetaG) {
        dom.delta_max = wishart_delta_meta(std::min(beta, -1e-300));
    } else if (beta >= kBetaAsymSplit) {
        dom.delta_max = asym_delta_upper(beta);
    } else {
        dom.delta_max = asym_delta_lower(beta);
    }
    return dom;
}

double tricomi_density(const SupportParams& p, double x) {
    if (std::abs(x) > 1.0) throw DomainError("tricomi_density: x outside [-1,1]");
    const auto dom = feasible_domain(p.beta);
    if (!dom.contains(p.m_center, p.delta))
        throw DomainError("tricomi_density: (m,delta) outside the feasible domain");
    const double bd2 = p.beta * p.delta * p.delta;
    const double num =
        1.0 + bd2 / 2.0 + 2.0 * (1.0 - p.m_center) * x / p.delta - bd2 * x * x;
    const double one_minus_x2 = (1.0 - x) * (1.0 + x);
    if (one_minus_x2 <= 0.0) {
        // Edge: a vanishing numerator beats the inverse square root.
        if (std::abs(num) < 1e-12) return 0.0;
        return kInf;
    }
    return num / (kPi * std::sqrt(one_minus_x2));
}

double lagrange_xi(const SupportParams& p) {
    if (p.delta <= 0.0) throw DomainError("lagrange_xi: delta must be positive");
    const double d2 = p.delta * p.delta;
    return 4.0 / d2 + p.m_center * (2.0 * p.beta - 4.0 / d2);
}

std::tuple<SupportParams, BranchId, EvaporationState> stable_branch(double beta) {
    if (beta >= 2.0) {
        const double d = std::sqrt(2.0 / beta);
        return {SupportParams(1.0, d, beta), BranchId(Branch::Semicircle, beta),
                EvaporationState{0.0, 1.0}};
    }
    if (beta >= 0.0) {
        const double d = wishart_delta_stable(beta);
        return {SupportParams(d, d, beta), BranchId(Branch::Wishart, beta),
                EvaporationState{0.0, 1.0}};
    }
    const double beta_minus = solve_beta_minus().beta_minus;
    if (beta >= beta_minus) {
        // Typical phase (alpha = 2): the sea is frozen at the beta = 0 Wishart.
        return {SupportParams(2.0, 2.0, beta), BranchId(Branch::Wishart, beta),
                EvaporationState{0.0, 1.0}};
    }
    const double mu = evaporated_mu(beta);
    return {SupportParams(2.0, 2.0, beta), BranchId(Branch::Separable, beta),
            EvaporationState{mu, 1.0 - mu}};
}

std::pair<SupportParams, BranchId> metastable_branch(double beta) {
    if (beta >= 0.0) throw DomainError("metastable_branch: beta must be negative");
    if (beta >= kBetaG) {
        const double d = wishart_delta_meta(beta);
        return {SupportParams(d, d, beta), BranchId(Branch::MetaWishart, beta)};
    }
    if (beta >= kBetaAsymSplit) {
        const double d = asym_delta_upper(beta);
        return {SupportParams(d, d, beta), BranchId(Branch::AsymArcsineUpper, beta)};
    }
    if (beta > -2.0) {
        const double d = asym_delta_lower(beta);
        return {SupportParams(d, d, beta), BranchId(Branch::AsymArcsineLower, beta)};
    }
    const double d = std::sqrt(-2.0 / beta);
    return {SupportParams(1.0, d, beta), BranchId(Branch::Arcsine, beta)};
}

ThermoPoint thermo(const SupportParams& p, Branch branch) {
    const auto dom = feasible_domain(p.beta);
    if (!dom.contains(p.m_center, p.delta))
        throw DomainError("thermo: (m,delta) outside the feasible domain");
    const double om = 1.0 - p.m_center;
    const double d2 = p.delta * p.delta;
    const double d4 = d2 * d2;
    const double u = 1.0 - om * om + d2 / 2.0 - p.beta * d4 / 8.0;
    const double s =
        -2.0 * om * om / d2 - p.beta * p.beta * d4 / 16.0 + std::log(p.delta / 2.0);
    return ThermoPoint(p.beta, u, s, 3, branch);
}

ThermoPoint thermo(const SupportParams& p) {
    Branch tag;
    const bool at_corner =
        std::abs(p.m_center - 1.0) < 1e-9 &&
        std::abs(p.beta) >= 2.0 - 1e-9 &&
        std::abs(p.delta - std::sqrt(2.0 / std::abs(p.beta))) < 1e-9;
    if (at_corner) {
        tag = p.beta > 0.0 ? Branch::Semicircle : Branch::Arcsine;
    } else if (std::abs(p.m_center - p.delta) < 1e-9) {
        if (p.beta >= 0.0)
            tag = Branch::Wishart;
        else if (p.beta >= kBetaG)
            tag = Branch::MetaWishart;
        else if (p.beta >= kBetaAsymSplit)
            tag = Branch::AsymArcsineUpper;
        else
            tag = Branch::AsymArcsineLower;
    } else if (std::abs(p.m_center - 1.0) < 1e-9) {
        tag = p.beta >= 0.0 ? Branch::Semicircle : Branch::Arcsine;
    } else {
        // Interior family point; label by the closer symmetry class.
        tag = std::abs(p.m_center - p.delta) < std::abs(p.m_center - 1.0)
                  ? Branch::Wishart
                  : Branch::Semicircle;
    }
    const auto dom = feasible_domain(p.beta);
    if (!dom.contains(p.m_center, p.delta))
        throw DomainError("thermo: (m,delta) outside the feasible domain");
    const double om = 1.0 - p.m_center;
    const double d2 = p.delta * p.delta;
    const double d4 = d2 * d2;
    const double u = 1.0 - om * om + d2 / 2.0 - p.beta * d4 / 8.0;
    const double s =
        -2.0 * om * om / d2 - p.beta * p.beta * d4 / 16.0 + std::log(p.delta / 2.0);
    return ThermoPoint(p.beta, u, s, 3, tag);
}

ThermoPoint thermo_negative_stable(double beta) {
    if (beta >= 0.0) throw DomainError("thermo_negative_stable: beta must be negative");
    const double beta_minus = solve_beta_minus().beta_minus;
    if (beta >= beta_minus) {
        // u = 0, s = -1/2, beta f = 1/2 (typical phase).
        return ThermoPoint(beta, 0.0, -0.5, 2, Branch::Wishart);
    }
    const double mu = evaporated_mu(beta);
    const double u = mu * mu;
    const double s = std::log1p(-mu) - 0.5;
    return ThermoPoint(beta, u, s, 2, Branch::Separable);
}

ThermoPoint thermo_stable(double beta) {
    if (beta < 0.0) throw DomainError("thermo_stable: use thermo_negative_stable for beta < 0");
    auto [p, id, ev] = stable_branch(beta);
    return thermo(p, id.tag);
}

ThermoPoint thermo_metastable(double beta) {
    auto [p, id] = metastable_branch(beta);
    return thermo(p, id.tag);
}

double metastable_dbetaf_dbeta(double beta) {
    // Chain rule along m = delta, beta = 4/delta^3 - 2/delta^2:
    //   beta f(delta) = 11/4 - 9/delta + 9/delta^2 - ln(delta/2)
    const double d = wishart_delta_meta(beta);
    const double dbf_dd = 9.0 / (d * d) - 18.0 / (d * d * d) - 1.0 / d;
    const double db_dd = -12.0 / (d * d * d * d) + 4.0 / (d * d * d);
    if (db_dd == 0.0) throw DomainError("metastable_dbetaf_dbeta: at the branch edge");
    return dbf_dd / db_dd;
}

namespace {
double wishart_s_of_delta(double d) {
    return -9.0 / 4.0 + 5.0 / d - 3.0 / (d * d) + std::log(d / 2.0);
}
}  // namespace

double entropy_vs_u(double u, BranchFamily family) {
    switch (family) {
        case BranchFamily::PositiveStable: {
            if (u <= 1.0 || u > 2.0 + 1e-12)
                throw DomainError("entropy_vs_u: u outside (1,2] on the positive stable branch");
            if (u <= 1.25) return 0.5 * std::log(u - 1.0) - 0.25;
            const double d = 3.0 - std::sqrt(9.0 - 4.0 * u);
            return wishart_s_of_delta(d);
        }
        case BranchFamily::NegativeStable: {
            const double mu2 = [] {
                const double mu = solve_beta_minus().mu_minus;
                return mu * mu;
            }();
            if (u <= 0.0 || u >= 1.0)
                throw DomainError("entropy_vs_u: u outside (0,1) on the negative stable branch");
            if (u <= mu2) return solve_beta_minus().beta_minus * u - 0.5;
            return std::log1p(-std::sqrt(u)) - 0.5;
        }
        case BranchFamily::Metastable: {
            if (u <= 1.0 || u > 2.25 + 1e-12)
                throw DomainError("entropy_vs_u: u outside (1,9/4] on the metastable branch");
            if (u <= 1.75) return 0.5 * std::log(u - 1.0) - 0.5 * std::log(3.0) - 0.25;
            if (u > 2.0) {
                const double d = 3.0 + std::sqrt(9.0 - 4.0 * u);
                return wishart_s_of_delta(d);
            }
            // Asymmetric-arcsine window: no printed closed form.  u(delta) is
            // monotone on delta in [1,2] along the lower root; invert there.
            auto u_of_delta = [](double d) {
                const double g = std::sqrt((2.0 + kSqrt2 - d) * (d - 2.0 + kSqrt2));
                return 2.0 * d - 3.0 * d * d / 8.0 + d * g / 8.0;
            };
            const double d = brent([&](double dd) { return u_of_delta(dd) - u; }, 1.0, 2.0);
            const double beta = asym_beta_of_delta(d, -1);
            return thermo(SupportParams(d, d, beta), Branch::AsymArcsineLower).s;
        }
    }
    throw DomainError("entropy_vs_u: unknown family");
}

double entropy_vs_purity(double pi, int n) {
    if (n < 1) throw DomainError("entropy_vs_purity: n must be >= 1");
    if (pi <= 1.0 / n || pi >= 1.0)
        throw DomainError("entropy_vs_purity: purity outside (1/n, 1)");
    const double u = n * pi;
    const auto bm = solve_beta_minus();
    const double mu2 = bm.mu_minus * bm.mu_minus;
    if (pi <= 1.25 / n) return 0.5 * std::log(u - 1.0) - 0.25;
    // the coexistence line takes over at pi = 2/n (its left endpoint)
    if (pi < 2.0 / n) return wishart_s_of_delta(3.0 - std::sqrt(9.0 - 4.0 * u));
    if (pi <= mu2) return bm.beta_minus * pi - 0.5;
    return std::log1p(-std::sqrt(pi)) - 0.5;
}

double isopurity_log_volume(double pi, int n) {
    return static_cast<double>(n) * n * entropy_vs_purity(pi, n);
}

std::pair<double, double> lambda_extremes(double pi, int n) {
    if (n < 1) throw DomainError("lambda_extremes: n must be >= 1");
    if (pi <= 1.0 / n || pi >= 1.0)
        throw DomainError("lambda_extremes: purity outside (1/n, 1)");
    const double u = n * pi;
    double lmin = 0.0, lmax;
    if (pi <= 1.25 / n) {
        lmin = std::max(0.0, (1.0 - 2.0 * std::sqrt(u - 1.0)) / n);
        lmax = (1.0 + 2.0 * std::sqrt(u - 1.0)) / n;
    } else if (pi <= 2.0 / n) {
        lmax = 2.0 / n * (3.0 - 2.0 * std::sqrt(2.25 - u));
    } else {
        lmax = std::sqrt(pi);
    }
    return {lmin, lmax};
}

double density_of_eigenvalues(Branch branch, const SupportParams& p, double lambda) {
    const double a = p.a(), b = p.b();
    if (lambda < a - kProbTol || lambda > b + kProbTol)
        throw DomainError("density_of_eigenvalues: lambda outside the support");
    switch (branch) {
        case Branch::Semicircle: {
            const double rad = (lambda - a) * (b - lambda);
            return p.beta / kPi * std::sqrt(std::max(0.0, rad));
        }
        case Branch::Wishart:
        case Branch::MetaWishart:
        case Branch::Separable: {
            // rho(l) = 4/(pi b^2) sqrt((b-l)/l) (b-2 + 2(4-b) l/b), b = 2 delta.
            const double bb = 2.0 * p.delta;
            if (lambda <= 0.0) return kInf;
            if (lambda >= bb) return 0.0;
            return 4.0 / (kPi * bb * bb) * std::sqrt((bb - lambda) / lambda) *
                   (bb - 2.0 + 2.0 * (4.0 - bb) * lambda / bb);
        }
        case Branch::Arcsine:
        case Branch::AsymArcsineUpper:
        case Branch::AsymArcsineLower: {
            const double x = (lambda - p.m_center) / p.delta;
            const double phi = tricomi_density(p, std::clamp(x, -1.0, 1.0));
            return phi == kInf ? kInf : phi / p.delta;
        }
    }
    throw DomainError("density_of_eigenvalues: unknown branch");
}

double sea_density_mixed(double x, double lambda_tilde) {
    if (x < 0.0 || x >= 1.0) throw DomainError("sea_density_mixed: x outside [0,1)");
    const double top = 4.0 * (1.0 - std::sqrt(x));
    if (lambda_tilde <= 0.0 || lambda_tilde > top)
        throw DomainError("sea_density_mixed: lambda outside (0, 4(1-sqrt(x))]");
    return std::sqrt((top - lambda_tilde) / lambda_tilde) / (2.0 * kPi * (1.0 - std::sqrt(x)));
}

std::vector<CriticalPoint> critical_points() {
    const auto bm = solve_beta_minus();
    return {
        {2.0, "beta_plus", 2, "d2s/dbeta2 finite jump 1/8"},
        {bm.beta_minus, "beta_minus", 1,
         "u jumps by mu_-^2, beta f continuous, Ds/Du = beta_-"},
        {-2.0 / 27.0, "beta_g", 2, "d2s/dbeta2 diverges, heat-capacity exponent -1/2"},
        {-2.0, "minus_beta_plus", 2, "d2s/dbeta2 finite jump 5/32"},
    };
}

}  // namespace entrostat::analytic
