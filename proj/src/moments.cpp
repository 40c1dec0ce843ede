#include "entrostat/moments.hpp"

#include <cmath>
#include <thread>

namespace entrostat::moments {

WeingartenTable weingarten(int order, long long l) {
    if (order != 2 && order != 4) throw DomainError("weingarten: order must be 2 or 4");
    // poles of the printed formulas sit at L <= order - 1
    if (l < order) throw DomainError("weingarten: need l >= order (formula poles)");
    WeingartenTable t{order, l, {}};
    const double L = static_cast<double>(l);
    if (order == 2) {
        t.coeffs["[1^2]"] = 1.0 / ((L - 1.0) * (L + 1.0));
        t.coeffs["[2]"] = -1.0 / ((L - 1.0) * L * (L + 1.0));
        return t;
    }
    const double den7 =
        (L - 3.0) * (L - 2.0) * (L - 1.0) * L * (L + 1.0) * (L + 2.0) * (L + 3.0);
    const double L2 = L * L;
    t.coeffs["[1^4]"] = (L2 * L2 - 8.0 * L2 + 6.0) / (den7 * L);
    t.coeffs["[2,1^2]"] = -1.0 / ((L - 3.0) * (L - 1.0) * L * (L + 1.0) * (L + 3.0));
    t.coeffs["[2^2]"] = (L2 + 6.0) / (den7 * L);
    t.coeffs["[3,1]"] = (2.0 * L2 - 3.0) / (den7 * L);
    t.coeffs["[4]"] = -5.0 / den7;
    return t;
}

namespace {

struct MonomialAccum {
    std::complex<double> sum{0.0, 0.0};
    std::vector<std::complex<double>> batch_sums;
};

void monomial_worker(int l, const MonomialPairing& p, long long samples, int batches,
                     sampling::RngSpec spec, MonomialAccum& acc) {
    sampling::CounterRng rng(spec);
    const int n = p.order();
    acc.batch_sums.assign(batches, {0.0, 0.0});
    const long long per_batch = samples / batches;
    for (int b = 0; b < batches; ++b) {
        std::complex<double> bsum{0.0, 0.0};
        for (long long s = 0; s < per_batch; ++s) {
            const Eigen::MatrixXcd u = sampling::haar_unitary(l, rng);
            std::complex<double> prod{1.0, 0.0};
            for (int a = 0; a < n; ++a) {
                prod *= u(p.row[a], p.col[a]);
                // U+_{k,l} = conj(U_{l,k})
                prod *= std::conj(u(p.dcol[a], p.drow[a]));
            }
            bsum += prod;
        }
        acc.batch_sums[b] = bsum / static_cast<double>(per_batch);
        acc.sum += bsum;
    }
}

}  // namespace

McEstimate unitary_monomial_mc(int l, const MonomialPairing& pairing, long long samples,
                               sampling::RngSpec rng, int workers) {
    if (l < 2) throw DomainError("unitary_monomial_mc: l must be >= 2");
    if (samples < 1000) throw DomainError("unitary_monomial_mc: samples must be >= 1e3");
    if (workers < 1) workers = 1;
    const int batches_per_worker = std::max(20 / workers + 1, 4);
    std::vector<MonomialAccum> acc(workers);
    std::vector<std::thread> pool;
    const long long per_worker = samples / workers;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back(monomial_worker, l, std::cref(pairing), per_worker,
                          batches_per_worker, rng.with_stream(rng.stream + w),
                          std::ref(acc[w]));
    for (auto& t : pool) t.join();

    std::vector<std::complex<double>> batch_means;
    for (int w = 0; w < workers; ++w)
        for (const auto& bm : acc[w].batch_sums) batch_means.push_back(bm);
    std::complex<double> mean{0.0, 0.0};
    for (const auto& bm : batch_means) mean += bm;
    mean /= static_cast<double>(batch_means.size());
    double var = 0.0;
    for (const auto& bm : batch_means) var += std::norm(bm - mean);
    const double nb = static_cast<double>(batch_means.size());
    var /= (nb - 1.0);
    return {mean, std::sqrt(var / nb)};
}

double weingarten_prediction(int l, const MonomialPairing& p) {
    const int n = p.order();
    const double L = static_cast<double>(l);
    if (n == 1) {
        return (p.row[0] == p.dcol[0] && p.col[0] == p.drow[0]) ? 1.0 / L : 0.0;
    }
    if (n != 2) throw DomainError("weingarten_prediction: implemented for order <= 2");
    const auto table = weingarten(2, l);
    const double c_id = table.coeffs.at("[1^2]");
    const double c_sw = table.coeffs.at("[2]");
    // sum over tau, sigma in S2 of C[sigma] prod_a d(i_a, l_{tau(a)}) d(j_a, k_{tau sigma(a)})
    double value = 0.0;
    for (int tau = 0; tau < 2; ++tau) {
        for (int sigma = 0; sigma < 2; ++sigma) {
            auto perm = [](int pidx, int a) { return pidx == 0 ? a : 1 - a; };
            bool match = true;
            for (int a = 0; a < 2 && match; ++a) {
                if (p.row[a] != p.dcol[perm(tau, a)]) match = false;
                if (p.col[a] != p.drow[perm(sigma, perm(tau, a))]) match = false;
            }
            if (match) value += (sigma == 0 ? c_id : c_sw);
        }
    }
    return value;
}

OperatorOnDoubledSpace twirl2(const OperatorOnDoubledSpace& theta, int l) {
    if (l < 2) throw DomainError("twirl2: l must be >= 2");
    const long long d = static_cast<long long>(l) * l;
    if (theta.rows() != d || theta.cols() != d)
        throw DomainError("twirl2: operator must be l^2 x l^2");
    const double L = static_cast<double>(l);
    // S is the permutation (i,j) -> (j,i); only the two traces are needed.
    const std::complex<double> tr = theta.trace();
    std::complex<double> tr_s{0.0, 0.0};
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j)
            tr_s += theta(static_cast<long long>(j) * l + i, static_cast<long long>(i) * l + j);
    const double den = L * (L * L - 1.0);
    const std::complex<double> ci = (L * tr - tr_s) / den;
    const std::complex<double> cs = (L * tr_s - tr) / den;
    OperatorOnDoubledSpace out = OperatorOnDoubledSpace::Zero(d, d);
    for (long long a = 0; a < d; ++a) out(a, a) = ci;
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j)
            out(static_cast<long long>(i) * l + j, static_cast<long long>(j) * l + i) += cs;
    return out;
}

OperatorOnDoubledSpace twirl2_mc(const OperatorOnDoubledSpace& theta, int l,
                                 long long samples, sampling::RngSpec rng_spec) {
    const long long d = static_cast<long long>(l) * l;
    if (theta.rows() != d || theta.cols() != d)
        throw DomainError("twirl2_mc: operator must be l^2 x l^2");
    sampling::CounterRng rng(rng_spec);
    OperatorOnDoubledSpace acc = OperatorOnDoubledSpace::Zero(d, d);
    OperatorOnDoubledSpace uu(d, d);
    for (long long s = 0; s < samples; ++s) {
        const Eigen::MatrixXcd u = sampling::haar_unitary(l, rng);
        for (int i = 0; i < l; ++i)
            for (int j = 0; j < l; ++j)
                for (int k = 0; k < l; ++k)
                    for (int m = 0; m < l; ++m)
                        uu(static_cast<long long>(i) * l + k,
                           static_cast<long long>(j) * l + m) = u(i, j) * u(k, m);
        acc.noalias() += uu * theta * uu.adjoint();
    }
    return acc / static_cast<double>(samples);
}

double pure_first_moment(int n, int m) {
    if (n < 1 || m < 1) throw DomainError("pure_first_moment: dims must be >= 1");
    return (static_cast<double>(n) + m) / (static_cast<double>(n) * m + 1.0);
}

double pure_second_cumulant(int n, int m) {
    const long long nm = static_cast<long long>(n) * m;
    if (nm < 2) throw DomainError("pure_second_cumulant: need n*m >= 2");
    const double N = n, M = m, L = static_cast<double>(nm);
    return 2.0 * (N * N - 1.0) * (M * M - 1.0) /
           ((1.0 + L) * (1.0 + L) * (2.0 + L) * (3.0 + L));
}

double pure_cumulant_asymptotic(int order, int n) {
    if (order < 1) throw DomainError("pure_cumulant_asymptotic: order must be >= 1");
    double fact = 1.0;  // (3k-3)! / (2k)!
    for (int i = 2; i <= 3 * order - 3; ++i) fact *= i;
    for (int i = 2; i <= 2 * order; ++i) fact /= i;
    return std::pow(2.0, order + 1) * fact / std::pow(static_cast<double>(n), 3 * order - 2);
}

double mixed_first_moment(double x, int n, int m) {
    const double N = n, M = m, L = N * M;
    if (x < 1.0 / L - kProbTol || x > 1.0 + kProbTol)
        throw DomainError("mixed_first_moment: x outside [1/(nm), 1]");
    const double den = L * L - 1.0;
    return M * (N * N - 1.0) / den * x + N * (M * M - 1.0) / den;
}

namespace {

// Integer-exact coefficient evaluation; the (N^2 M^2 - 7)^2 - 36 denominator
// cancels catastrophically in floating point at small L.
struct SecondMomentCoeffs {
    double c0, c2, c22, c3, c4, den;
};

SecondMomentCoeffs second_moment_coeffs(int n, int m) {
    const long long N = n, M = m, L = N * M;
    if (L <= 64) {
        const long long N2 = N * N, M2 = M * M, L2 = L * L;
        const long long den = L2 * (L2 - 7) * (L2 - 7) - 36;
        const long long c0 =
            (M2 - 1) * (N2 * N2 * M2 * (M2 - 1) - 2 * N2 * (6 * M2 - 7) + 22);
        const long long c2 = 2 * N * M * (N2 - 1) * (M2 - 1) * (L2 - 14);
        const long long c22 =
            (N2 - 1) * (M2 * M2 * N2 * N2 + M2 * M2 * N2 - 14 * N2 * M2 + 6 * M2 + 30);
        const long long c3 = 40 * (N2 - 1) * (M2 - 1);
        const long long c4 = -10 * N * M * (N2 - 1) * (M2 - 1);
        return {static_cast<double>(c0), static_cast<double>(c2), static_cast<double>(c22),
                static_cast<double>(c3), static_cast<double>(c4), static_cast<double>(den)};
    }
    const double N2 = static_cast<double>(N) * N, M2 = static_cast<double>(M) * M;
    const double L2 = static_cast<double>(L) * L;
    return {(M2 - 1) * (N2 * N2 * M2 * (M2 - 1) - 2 * N2 * (6 * M2 - 7) + 22),
            2.0 * N * M * (N2 - 1) * (M2 - 1) * (L2 - 14),
            (N2 - 1) * (M2 * M2 * N2 * N2 + M2 * M2 * N2 - 14 * N2 * M2 + 6 * M2 + 30),
            40.0 * (N2 - 1) * (M2 - 1),
            -10.0 * N * M * (N2 - 1) * (M2 - 1),
            L2 * (L2 - 7) * (L2 - 7) - 36};
}

}  // namespace

double mixed_second_moment_given_spectrum(const Spectrum& spec, int n, int m) {
    const long long L = static_cast<long long>(n) * m;
    if (static_cast<long long>(spec.size()) != L)
        throw DomainError("mixed_second_moment_given_spectrum: spectrum length must be n*m");
    if (L < 4) throw DomainError("mixed_second_moment_given_spectrum: need n*m >= 4");
    double t2 = 0.0, t3 = 0.0, t4 = 0.0;
    for (double v : spec.values()) {
        const double v2 = v * v;
        t2 += v2;
        t3 += v2 * v;
        t4 += v2 * v2;
    }
    const auto c = second_moment_coeffs(n, m);
    return (c.c0 + c.c2 * t2 + c.c22 * t2 * t2 + c.c3 * t3 + c.c4 * t4) / c.den;
}

double mixed_second_cumulant(double x, int n, int m, double t3, double t4) {
    const double N = n, M = m, L = N * M;
    if (x < 1.0 / L - kProbTol || x > 1.0 + kProbTol)
        throw DomainError("mixed_second_cumulant: x outside [1/(nm), 1]");
    if (t3 <= 0.0 || t3 > 1.0 + kProbTol || t4 <= 0.0 || t4 > 1.0 + kProbTol)
        throw DomainError("mixed_second_cumulant: invariants outside (0, 1]");
    const double A = (N * N - 1.0) * (M * M - 1.0);
    const double L2 = L * L;
    const double d1 = (L2 - 1.0) * (L2 - 1.0) * (L2 * L2 - 13.0 * L2 + 36.0);
    const double d2 = L2 * (L2 - 7.0) * (L2 - 7.0) - 36.0;
    return 2.0 * A * (L2 + 11.0) / d1 - x * 4.0 * L * A * (L2 + 11.0) / d1 +
           x * x * 2.0 * A * (L2 * L2 - 4.0 * L2 + 15.0) / d1 + t3 * 40.0 * A / d2 -
           t4 * 10.0 * L * A / d2;
}

double high_temp_first_moment(double x, double beta, int n, int m, double t3, double t4) {
    return mixed_first_moment(x, n, m) - beta * mixed_second_cumulant(x, n, m, t3, t4);
}

double gaussian_first_moment(double x, int n, int m) {
    if (n < 1 || m < 1) throw DomainError("gaussian_first_moment: dims must be >= 1");
    return 1.0 / n + x / m;
}

}  // namespace entrostat::moments
