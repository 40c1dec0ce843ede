#pragma once

#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "entrostat/core.hpp"

namespace entrostat::analytic {

// Region of the (delta, m) plane where the rescaled eigenvalue density is a
// nonnegative probability density, at fixed inverse temperature.
struct FeasibleDomain {
    double beta;
    std::function<double(double)> lower;  // lower boundary m(delta)
    std::function<double(double)> upper;  // upper boundary m(delta)
    double delta_max;
    std::optional<std::pair<double, double>> corner;  // (delta, m) eye corner

    bool contains(double m, double delta, double tol = 1e-9) const {
        if (delta < -tol || delta > delta_max + tol) return false;
        if (delta <= 0.0) return std::abs(m - 1.0) <= tol;
        return m >= lower(delta) - tol && m <= upper(delta) + tol;
    }
};

// Detached largest eigenvalue and the rescaling factor of the remaining sea.
struct EvaporationState {
    double mu;
    double sea_scale;  // 1 - mu
};

struct CriticalPoint {
    double beta_c;
    std::string name;
    int order;              // 1 = first order, 2 = second order
    std::string signature;  // which derivative of s jumps/diverges
};

struct BetaMinus {
    double mu_minus;
    double beta_minus;
};

// Root of mu/(2(1-mu)) = -ln(1-mu) on (0.5, 0.99) and the first-order
// critical temperature beta_- = -1/(2 mu_-(1-mu_-)).
BetaMinus solve_beta_minus();

// Level curves of the feasibility conditions.
double gamma1(double delta, double beta, int sign);  // x_{+-} = +-1 curves
double gamma2(double delta, double beta, int sign);  // discriminant = 0 curves

FeasibleDomain feasible_domain(double beta);

// Rescaled density phi(x) on [-1,1].  Returns +inf at an edge where the
// numerator does not vanish (integrable divergence).
double tricomi_density(const SupportParams& p, double x);

// Imaginary part of the Lagrange multiplier fixing the unit-trace condition:
// Im xi = 4/delta^2 + m (2 beta - 4/delta^2).
double lagrange_xi(const SupportParams& p);

// Inversions of the branch relations, each monotone on its printed interval.
double wishart_delta_stable(double beta);      // beta in [0,2]   -> delta in [1,2]
double wishart_delta_meta(double beta);        // beta in [-2/27,0) -> delta in (2,3]
double asym_delta_upper(double beta);          // beta in [-3/2+sqrt2,-2/27) -> delta in (3,2+sqrt2]
double asym_delta_lower(double beta);          // beta in (-2,-3/2+sqrt2)    -> delta in (1,2+sqrt2)
double asym_beta_of_delta(double delta, int sign);

// mu(beta) = 1/2 + (1/2) sqrt(1+2/beta), defined for beta <= -2.
double evaporated_mu(double beta);

std::tuple<SupportParams, BranchId, EvaporationState> stable_branch(double beta);
std::pair<SupportParams, BranchId> metastable_branch(double beta);

// Thermodynamic densities in the alpha = 3 scaling:
//   u  = 1 - (1-m)^2 + delta^2/2 - beta delta^4/8
//   s  = -2 (1-m)^2/delta^2 - beta^2 delta^4/16 + ln(delta/2)
ThermoPoint thermo(const SupportParams& p, Branch branch);
ThermoPoint thermo(const SupportParams& p);  // classifies the branch tag

// Stable branch in the alpha = 2 scaling for beta < 0 (typical phase for
// beta_- <= beta < 0, separable below beta_-).
ThermoPoint thermo_negative_stable(double beta);

// Convenience: thermodynamics along the named alpha = 3 branches.
ThermoPoint thermo_stable(double beta);      // beta >= 0
ThermoPoint thermo_metastable(double beta);  // beta < 0

// d(beta f)/d beta along the metastable Wishart continuation, via the
// closed-form chain rule in delta (used for the expansion checks at beta_g).
double metastable_dbetaf_dbeta(double beta);

enum class BranchFamily { PositiveStable, NegativeStable, Metastable };

double entropy_vs_u(double u, BranchFamily family);

// Entropy density of the isopurity manifold at purity pi, subsystem dim n.
double entropy_vs_purity(double pi, int n);
double isopurity_log_volume(double pi, int n);  // n^2 * s

std::pair<double, double> lambda_extremes(double pi, int n);

// lambda-space density rho(lambda) = phi((lambda-m)/delta)/delta, using the
// published closed forms where available.
double density_of_eigenvalues(Branch branch, const SupportParams& p, double lambda);

// Sea density for mixed global states: supported on (0, 4(1-sqrt(x))].
double sea_density_mixed(double x, double lambda_tilde);

std::vector<CriticalPoint> critical_points();

}  // namespace entrostat::analytic
