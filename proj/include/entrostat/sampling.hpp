#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "entrostat/core.hpp"

namespace entrostat::sampling {

// Counter-based generator key: identical (seed, stream) reproduce the same
// sequence, and distinct streams are independent, so workers can be assigned
// disjoint streams without coordination.
struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    RngSpec with_stream(std::uint64_t s) const { return {seed, s}; }
};

class CounterRng {
  public:
    explicit CounterRng(RngSpec spec);
    std::uint64_t next_u64();
    double uniform();               // [0,1)
    double uniform_open();          // (0,1)
    double uniform_symmetric(double h);  // (-h, h)
    double normal();                // standard normal (Box-Muller, cached pair)
    double exponential();           // rate 1
    std::uint64_t uniform_index(std::uint64_t n);  // {0,...,n-1}

  private:
    std::uint64_t key0_, key1_, counter_ = 0;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

Eigen::MatrixXcd haar_unitary(int l, CounterRng& rng);

// Haar-random pure state of dimension dim (normalized complex Gaussian).
Eigen::VectorXcd haar_state(long long dim, CounterRng& rng);

// Eigenvalues (descending) of rho_A = Tr_B |psi><psi| for a Haar pure state.
Spectrum reduced_spectrum(const BipartiteDims& dims, CounterRng& rng);

// Flat density on the (l-1)-simplex via exponential normalization.
Spectrum simplex_uniform(int l, CounterRng& rng);

struct BinnedEnsemble {
    std::vector<double> edges;      // bins + 1 entries, partition of [1/L, 1]
    std::vector<long long> counts;
    std::vector<double> mean_x;     // conditional mean of x within the bin
    std::vector<double> mean_piA;
    std::vector<double> var_piA;
    std::vector<double> mean_t3;
    std::vector<double> mean_t4;
    long long total = 0;
};

// Purification-induced ensemble of mixed global states: Haar pure states on
// L^2 dimensions, binned by the global purity x = Tr(Lambda_X^2).
BinnedEnsemble purified_mixed_ensemble(const BipartiteDims& dims, long long samples,
                                       int bins, RngSpec rng, int workers = 1);

struct McmcOptions {
    long long burn_in = -1;   // default max(1e5, 100 n^2)
    long long thin = -1;      // default n^2
    double step = 0.05;       // initial pairwise-transfer half-width
};

// Metropolis chain on the simplex targeting
//   exp(-beta_scaled sum lambda^2) * prod_{i<j} (lambda_i - lambda_j)^2.
// Proposals transfer mass between a random pair, so the trace is conserved
// exactly.  The step size is adapted during burn-in to an acceptance rate in
// [0.3, 0.5].
void canonical_mcmc(int n, double beta_scaled, long long n_samples, RngSpec rng,
                    const std::function<void(const std::vector<double>&)>& sink,
                    McmcOptions opt = {});

std::vector<Spectrum> canonical_mcmc_collect(int n, double beta_scaled,
                                             long long n_samples, RngSpec rng,
                                             McmcOptions opt = {});

struct Histogram {
    std::vector<double> edges;
    std::vector<double> density;  // normalized: sum(density * width) = 1
};

Histogram empirical_density(const std::vector<Spectrum>& samples, double rescale,
                            int bins);

}  // namespace entrostat::sampling
