#include "entrostat/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace entrostat::sampling {

namespace {
inline std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace

CounterRng::CounterRng(RngSpec spec)
    : key0_(splitmix(spec.seed)), key1_(splitmix(spec.stream ^ 0x6a09e667f3bcc909ULL)) {}

std::uint64_t CounterRng::next_u64() {
    std::uint64_t z = ++counter_;
    z = splitmix(z ^ key0_);
    z = splitmix(z + key1_);
    return z;
}

double CounterRng::uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::uniform_open() {
    return ((next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::uniform_symmetric(double h) { return h * (2.0 * uniform() - 1.0); }

double CounterRng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double t = 2.0 * kPi * uniform();
    cached_ = r * std::sin(t);
    has_cached_ = true;
    return r * std::cos(t);
}

double CounterRng::exponential() { return -std::log(uniform_open()); }

std::uint64_t CounterRng::uniform_index(std::uint64_t n) {
    // modulo bias is < 2^-53 for any n used here
    return next_u64() % n;
}

Eigen::MatrixXcd haar_unitary(int l, CounterRng& rng) {
    if (l < 1) throw DomainError("haar_unitary: l must be >= 1");
    Eigen::MatrixXcd g(l, l);
    for (int j = 0; j < l; ++j)
        for (int i = 0; i < l; ++i) g(i, j) = std::complex<double>(rng.normal(), rng.normal());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the R-diagonal phases; without this the distribution is not Haar.
    for (int j = 0; j < l; ++j) {
        const std::complex<double> d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0.0 ? d / a : 1.0);
    }
    return q;
}

Eigen::VectorXcd haar_state(long long dim, CounterRng& rng) {
    Eigen::VectorXcd v(dim);
    for (long long i = 0; i < dim; ++i)
        v(i) = std::complex<double>(rng.normal(), rng.normal());
    return v / v.norm();
}

Spectrum reduced_spectrum(const BipartiteDims& dims, CounterRng& rng) {
    const int n = dims.n(), m = dims.m();
    // psi reshaped to n x m; rho_A is the n x n Gram matrix (n <= m side).
    Eigen::MatrixXcd psi(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) psi(i, j) = std::complex<double>(rng.normal(), rng.normal());
    psi /= psi.norm();
    const Eigen::MatrixXcd rho = psi * psi.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
    return Spectrum(std::move(ev));
}

Spectrum simplex_uniform(int l, CounterRng& rng) {
    if (l < 1) throw DomainError("simplex_uniform: l must be >= 1");
    std::vector<double> v(l);
    double sum = 0.0;
    for (double& x : v) {
        x = rng.exponential();
        sum += x;
    }
    for (double& x : v) x /= sum;
    return Spectrum(std::move(v));
}

namespace {

struct BinAccum {
    long long count = 0;
    double sum_x = 0.0, sum_pi = 0.0, sumsq_pi = 0.0, sum_t3 = 0.0, sum_t4 = 0.0;
    void add(double x, double pi, double t3, double t4) {
        ++count;
        sum_x += x;
        sum_pi += pi;
        sumsq_pi += pi * pi;
        sum_t3 += t3;
        sum_t4 += t4;
    }
    void merge(const BinAccum& o) {
        count += o.count;
        sum_x += o.sum_x;
        sum_pi += o.sum_pi;
        sumsq_pi += o.sumsq_pi;
        sum_t3 += o.sum_t3;
        sum_t4 += o.sum_t4;
    }
};

void purified_worker(const BipartiteDims& dims, long long samples, int bins,
                     RngSpec rng_spec, std::vector<BinAccum>& acc) {
    const int n = dims.n(), m = dims.m();
    const long long l = dims.l();
    const double xlo = 1.0 / static_cast<double>(l);
    const double width = (1.0 - xlo) / bins;
    CounterRng rng(rng_spec);
    Eigen::MatrixXcd psi(l, l), rho(l, l);
    Eigen::MatrixXcd rho_a(n, n);
    for (long long s = 0; s < samples; ++s) {
        for (long long j = 0; j < l; ++j)
            for (long long i = 0; i < l; ++i)
                psi(i, j) = std::complex<double>(rng.normal(), rng.normal());
        psi /= psi.norm();
        rho.noalias() = psi * psi.adjoint();  // Tr_{X'} of the purification
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
        double x = 0.0, t3 = 0.0, t4 = 0.0;
        for (long long i = 0; i < l; ++i) {
            const double lam = std::max(0.0, es.eigenvalues()(i));
            const double l2 = lam * lam;
            x += l2;
            t3 += l2 * lam;
            t4 += l2 * l2;
        }
        // rho_A[i,i'] = sum_b rho[(i,b),(i',b)]
        rho_a.setZero();
        for (int i = 0; i < n; ++i)
            for (int i2 = 0; i2 < n; ++i2)
                for (int b = 0; b < m; ++b)
                    rho_a(i, i2) += rho(static_cast<long long>(i) * m + b,
                                        static_cast<long long>(i2) * m + b);
        const double pi_a = rho_a.squaredNorm();
        int bin = static_cast<int>((x - xlo) / width);
        bin = std::clamp(bin, 0, bins - 1);
        acc[bin].add(x, pi_a, t3, t4);
    }
}

}  // namespace

BinnedEnsemble purified_mixed_ensemble(const BipartiteDims& dims, long long samples,
                                       int bins, RngSpec rng, int workers) {
    if (bins < 1) throw DomainError("purified_mixed_ensemble: bins must be >= 1");
    if (workers < 1) workers = 1;
    std::vector<std::vector<BinAccum>> per_worker(workers, std::vector<BinAccum>(bins));
    std::vector<std::thread> pool;
    const long long base = samples / workers, rem = samples % workers;
    for (int w = 0; w < workers; ++w) {
        const long long quota = base + (w < rem ? 1 : 0);
        pool.emplace_back(purified_worker, std::cref(dims), quota, bins,
                          rng.with_stream(rng.stream + w), std::ref(per_worker[w]));
    }
    for (auto& t : pool) t.join();
    // Deterministic merge in worker order.
    std::vector<BinAccum> acc(bins);
    for (int w = 0; w < workers; ++w)
        for (int b = 0; b < bins; ++b) acc[b].merge(per_worker[w][b]);

    BinnedEnsemble out;
    const double xlo = 1.0 / static_cast<double>(dims.l());
    const double width = (1.0 - xlo) / bins;
    out.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) out.edges[b] = xlo + b * width;
    out.counts.resize(bins);
    out.mean_x.assign(bins, 0.0);
    out.mean_piA.assign(bins, 0.0);
    out.var_piA.assign(bins, 0.0);
    out.mean_t3.assign(bins, 0.0);
    out.mean_t4.assign(bins, 0.0);
    for (int b = 0; b < bins; ++b) {
        const auto& a = acc[b];
        out.counts[b] = a.count;
        out.total += a.count;
        if (a.count > 0) {
            const double mean = a.sum_pi / a.count;
            out.mean_x[b] = a.sum_x / a.count;
            out.mean_piA[b] = mean;
            out.mean_t3[b] = a.sum_t3 / a.count;
            out.mean_t4[b] = a.sum_t4 / a.count;
            if (a.count > 1)
                out.var_piA[b] = (a.sumsq_pi - a.count * mean * mean) / (a.count - 1);
        }
    }
    return out;
}

void canonical_mcmc(int n, double beta_scaled, long long n_samples, RngSpec rng_spec,
                    const std::function<void(const std::vector<double>&)>& sink,
                    McmcOptions opt) {
    if (n < 2) throw DomainError("canonical_mcmc: n must be >= 2");
    const long long burn_in =
        opt.burn_in >= 0 ? opt.burn_in
                         : std::max<long long>(100000, 100LL * n * n);
    const long long thin = opt.thin >= 0 ? opt.thin : static_cast<long long>(n) * n;
    CounterRng rng(rng_spec);

    // Deterministic Wishart-quantile start (distinct entries, valid trace).
    std::vector<double> lam(n);
    {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double q = (i + 0.5) / n;
            const double x = brent(
                [q](double t) {
                    const double r = std::sqrt(t / 4.0);
                    return 2.0 / kPi * (std::asin(r) + r * std::sqrt(1.0 - t / 4.0)) - q;
                },
                1e-12, 4.0 - 1e-12, 1e-12, 200);
            lam[i] = x;
            sum += x;
        }
        for (double& x : lam) x /= sum;
    }

    auto log_weight_delta = [&](int i, int j, double eps) {
        const double li = lam[i], lj = lam[j];
        const double ni = li + eps, nj = lj - eps;
        double d = -beta_scaled * (ni * ni + nj * nj - li * li - lj * lj);
        for (int k = 0; k < n; ++k) {
            if (k == i || k == j) continue;
            const double lk = lam[k];
            const double num = std::abs(ni - lk) * std::abs(nj - lk);
            const double den = std::abs(li - lk) * std::abs(lj - lk);
            if (num < 1e-300) return -1e30;  // collision, reject
            d += 2.0 * std::log(num / den);
        }
        const double gap_new = std::abs(ni - nj), gap_old = std::abs(li - lj);
        if (gap_new < 1e-300) return -1e30;
        d += 2.0 * std::log(gap_new / gap_old);
        return d;
    };

    double h = opt.step;
    long long accepted = 0, proposed = 0;
    const long long adapt_window = 2000;
    long long total_steps = burn_in + n_samples * thin;
    std::vector<double> sorted(n);
    long long emitted = 0;
    for (long long step = 0; step < total_steps && emitted < n_samples; ++step) {
        const int i = static_cast<int>(rng.uniform_index(n));
        int j = static_cast<int>(rng.uniform_index(n - 1));
        if (j >= i) ++j;
        const double eps = rng.uniform_symmetric(h);
        ++proposed;
        if (lam[i] + eps > 0.0 && lam[j] - eps > 0.0) {
            const double d = log_weight_delta(i, j, eps);
            if (d >= 0.0 || rng.uniform() < std::exp(d)) {
                lam[i] += eps;
                lam[j] -= eps;
                ++accepted;
            }
        }
        if (step < burn_in && proposed == adapt_window) {
            const double rate = static_cast<double>(accepted) / proposed;
            if (rate < 0.3) h *= 0.7;
            else if (rate > 0.5) h *= 1.3;
            accepted = 0;
            proposed = 0;
        }
        if (step >= burn_in && (step - burn_in) % thin == thin - 1) {
            sorted = lam;
            std::sort(sorted.begin(), sorted.end(), std::greater<double>());
            sink(sorted);
            ++emitted;
        }
    }
}

std::vector<Spectrum> canonical_mcmc_collect(int n, double beta_scaled,
                                             long long n_samples, RngSpec rng,
                                             McmcOptions opt) {
    std::vector<Spectrum> out;
    out.reserve(n_samples);
    canonical_mcmc(n, beta_scaled, n_samples, rng,
                   [&](const std::vector<double>& lam) { out.emplace_back(lam); }, opt);
    return out;
}

Histogram empirical_density(const std::vector<Spectrum>& samples, double rescale,
                            int bins) {
    if (samples.empty()) throw DomainError("empirical_density: no samples");
    if (bins < 1) throw DomainError("empirical_density: bins must be >= 1");
    double lo = 1e300, hi = -1e300;
    long long total = 0;
    for (const auto& s : samples)
        for (double v : s.values()) {
            const double x = rescale * v;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
            ++total;
        }
    if (hi <= lo) { hi = lo + 1.0; }
    Histogram hist;
    hist.edges.resize(bins + 1);
    const double width = (hi - lo) / bins;
    for (int b = 0; b <= bins; ++b) hist.edges[b] = lo + b * width;
    std::vector<long long> counts(bins, 0);
    for (const auto& s : samples)
        for (double v : s.values()) {
            int b = static_cast<int>((rescale * v - lo) / width);
            b = std::clamp(b, 0, bins - 1);
            ++counts[b];
        }
    hist.density.resize(bins);
    for (int b = 0; b < bins; ++b)
        hist.density[b] = static_cast<double>(counts[b]) / (total * width);
    return hist;
}

}  // namespace entrostat::sampling
