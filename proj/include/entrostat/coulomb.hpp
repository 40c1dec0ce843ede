#pragma once

#include <vector>

#include "entrostat/core.hpp"

namespace entrostat::coulomb {

struct MinimizationResult {
    Spectrum spectrum;
    double beta_f;  // beta f_N - ln N
    bool converged;
    int iterations;
    double grad_norm;  // KKT residual: free-set projected gradient norm
};

// beta f_N - ln N for the Coulomb gas in the alpha = 2 scaling:
//   beta f_N = beta sum lambda_i^2 - (2/N^2) sum_{i<j} ln|lambda_i - lambda_j|
double finite_free_energy(const Spectrum& spec, double beta, int n);

// Closed-form gradient d/d lambda_i = 2 beta lambda_i - (2/N^2) sum 1/(l_i-l_j).
std::vector<double> finite_free_energy_gradient(const std::vector<double>& lam,
                                                double beta, int n);

struct MinimizeOptions {
    int max_iter = 400;
    double tol = 1e-9;
};

// Local minimum over the simplex.  Projected descent with backtracking line
// search; the search direction is the Newton-preconditioned projected
// gradient (Levenberg-shifted when indefinite), and coordinates driven into
// the hard wall lambda = 0 are frozen there with their KKT multiplier checked
// for consistency.  Throws ConvergenceError after max_iter.
MinimizationResult minimize_free_energy(int n, double beta, const Spectrum& init,
                                        MinimizeOptions opt = {});

// Deterministic seeds for the two known basins.
Spectrum wishart_seed(int n);
Spectrum separable_seed(int n, double mu);

// Basin-resolved minimization at one temperature.
struct BasinPair {
    MinimizationResult typical;
    MinimizationResult separable;
};
BasinPair minimize_both_basins(int n, double beta, MinimizeOptions opt = {});

// Minimum of beta f_N over the simplex slice with the largest eigenvalue
// fixed at mu (remaining lambda_i <= mu, summing to 1 - mu).
std::vector<std::pair<double, double>> profile_fixed_max(int n, double beta,
                                                         const std::vector<double>& mu_grid,
                                                         MinimizeOptions opt = {});

// Bisection on beta f_typical - beta f_separable; returns beta_-^(N).
double locate_crossing(int n, double beta_lo, double beta_hi, double tol,
                       MinimizeOptions opt = {});

struct MaxEigenvalueRow {
    double beta;
    double lambda_max_global;
    double lambda_max_typical;
    double lambda_max_separable;
    double beta_f_typical;
    double beta_f_separable;
};

std::vector<MaxEigenvalueRow> max_eigenvalue_curve(int n,
                                                   const std::vector<double>& beta_grid,
                                                   MinimizeOptions opt = {});

}  // namespace entrostat::coulomb
