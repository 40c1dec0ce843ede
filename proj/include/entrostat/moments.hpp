#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "entrostat/core.hpp"
#include "entrostat/sampling.hpp"

namespace entrostat::moments {

// Weingarten coefficients C[sigma] of the basic unitary-group integral,
// keyed by conjugacy-class label.
struct WeingartenTable {
    int order;  // 2 or 4
    long long l;
    std::map<std::string, double> coeffs;
};

WeingartenTable weingarten(int order, long long l);

// Index pattern of <U_{i1 j1} ... U_{in jn} U+_{k1 l1} ... U+_{kn ln}>.
struct MonomialPairing {
    std::vector<int> row;   // i_a
    std::vector<int> col;   // j_a
    std::vector<int> drow;  // k_a
    std::vector<int> dcol;  // l_a
    int order() const { return static_cast<int>(row.size()); }
};

struct McEstimate {
    std::complex<double> estimate;
    double stderr_;
};

// Brute-force Haar average of the monomial, with batch-means standard error
// (>= 20 batches).  Workers draw from disjoint streams and are merged in
// worker order, so results are reproducible for fixed (seed, workers).
McEstimate unitary_monomial_mc(int l, const MonomialPairing& pairing, long long samples,
                               sampling::RngSpec rng, int workers = 1);

// Closed-form value of the same monomial from the order-n Weingarten sum
// (implemented for order 1 and 2).
double weingarten_prediction(int l, const MonomialPairing& pairing);

using OperatorOnDoubledSpace = Eigen::MatrixXcd;  // l^2 x l^2

// Two-fold twirling channel: c_I(theta) I + c_S(theta) S, with S the swap.
OperatorOnDoubledSpace twirl2(const OperatorOnDoubledSpace& theta, int l);

// Monte Carlo twirl (average of (U x U) theta (U x U)+ over Haar U), for
// cross-validation; returns the entrywise max |MC - analytic| scale via the
// batch stderr of the worst entry when requested by callers.
OperatorOnDoubledSpace twirl2_mc(const OperatorOnDoubledSpace& theta, int l,
                                 long long samples, sampling::RngSpec rng);

double pure_first_moment(int n, int m);
double pure_second_cumulant(int n, int m);

// Large-N cumulants of the purity for balanced bipartitions:
//   K_k = 2^{k+1} / N^{3k-2} * (3k-3)! / (2k)!
double pure_cumulant_asymptotic(int order, int n);

double mixed_first_moment(double x, int n, int m);

// Exact second moment of the local purity for a fixed global spectrum.
double mixed_second_moment_given_spectrum(const Spectrum& spec, int n, int m);

// Second cumulant at beta = 0; the spectral invariants <Tr L^3>_x and
// <Tr L^4>_x are caller-supplied (estimated by the sampling module).
double mixed_second_cumulant(double x, int n, int m, double t3, double t4);

// First-order high-temperature expansion M1(x,0) - beta K2(x,0).
double high_temp_first_moment(double x, double beta, int n, int m, double t3, double t4);

// Gaussian-approximation first moment, 1/n + x/m.
double gaussian_first_moment(double x, int n, int m);

}  // namespace entrostat::moments
