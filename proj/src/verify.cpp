#include "entrostat/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>

#include "entrostat/analytic.hpp"
#include "entrostat/coulomb.hpp"
#include "entrostat/moments.hpp"
#include "entrostat/sampling.hpp"
#include "entrostat/stats.hpp"

namespace entrostat::verify {

namespace {

using Clock = std::chrono::steady_clock;

class Reporter {
  public:
    explicit Reporter(std::vector<CheckResult>& out) : out_(out) {}

    // measured vs target with absolute tolerance
    void close(const std::string& id, const std::string& desc, double measured,
               double target, double tol, double seconds = 0.0,
               const std::string& note = "") {
        out_.push_back({id, desc, std::abs(measured - target) <= tol, measured, target,
                        tol, seconds, note});
    }
    // measured must be below the bound
    void below(const std::string& id, const std::string& desc, double measured,
               double bound, double seconds = 0.0, const std::string& note = "") {
        out_.push_back({id, desc, measured <= bound, measured, bound, bound, seconds, note});
    }
    void flag(const std::string& id, const std::string& desc, bool pass,
              const std::string& note = "") {
        out_.push_back({id, desc, pass, pass ? 1.0 : 0.0, 1.0, 0.0, 0.0, note});
    }

  private:
    std::vector<CheckResult>& out_;
};

double wishart_cdf(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 4.0) return 1.0;
    const double r = std::sqrt(x / 4.0);
    return 2.0 / kPi * (std::asin(r) + r * std::sqrt(1.0 - x / 4.0));
}

double semicircle_cdf(double x, double center, double radius) {
    const double t = x - center;
    if (t <= -radius) return 0.0;
    if (t >= radius) return 1.0;
    return 0.5 + (t * std::sqrt(radius * radius - t * t) +
                  radius * radius * std::asin(t / radius)) /
                     (kPi * radius * radius);
}

// Central second difference of s(beta) along a branch.
double d2s(const std::function<double(double)>& s_of_beta, double beta, double h) {
    return (s_of_beta(beta - h) - 2.0 * s_of_beta(beta) + s_of_beta(beta + h)) / (h * h);
}

double stable_s(double beta) { return analytic::thermo_stable(beta).s; }
double metastable_s(double beta) { return analytic::thermo_metastable(beta).s; }

double timed(const std::function<void()>& fn) {
    const auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------- acceptance

void acc_beta_minus(Reporter& rep) {
    analytic::BetaMinus bm{};
    const double secs = timed([&] {
        // recompute rather than hit the cache, so the timing is honest
        auto f = [](double mu) { return mu / (2.0 * (1.0 - mu)) + std::log1p(-mu); };
        const double mu = brent(f, 0.5, 0.99, 1e-15, 200);
        bm = {mu, -1.0 / (2.0 * mu * (1.0 - mu))};
    });
    rep.close("A01a", "mu_minus root of the transcendental equation", bm.mu_minus,
              0.71533, 1e-4, secs);
    rep.close("A01b", "beta_minus = -1/(2 mu(1-mu))", bm.beta_minus, -2.45541, 1e-4, secs);
    rep.below("A01c", "beta_minus runtime [s]", secs, 1e-3, secs);
}

void acc_landmarks(Reporter& rep) {
    rep.close("A02a", "u at beta=0", analytic::thermo_stable(0.0).u, 2.0, 1e-12);
    rep.close("A02b", "u at beta_+", analytic::thermo_stable(2.0).u, 1.25, 1e-12);
    rep.close("A02c", "u at beta_g (metastable)", analytic::thermo_metastable(-2.0 / 27.0).u,
              2.25, 1e-12);
    rep.close("A02d", "s at beta_+", analytic::thermo_stable(2.0).s, -0.25 - std::log(2.0),
              1e-12);
}

void acc_second_order(Reporter& rep) {
    const double h = 1e-3;
    double jump2 = 0.0, jump_m2 = 0.0;
    std::vector<double> div;
    const double secs = timed([&] {
        jump2 = d2s(stable_s, 2.0 + 2.0 * h, h) - d2s(stable_s, 2.0 - 2.0 * h, h);
        jump_m2 = d2s(metastable_s, -2.0 + 2.0 * h, h) - d2s(metastable_s, -2.0 - 2.0 * h, h);
        for (double eps : {1e-2, 1e-3, 1e-4})
            div.push_back(std::abs(d2s(metastable_s, -2.0 / 27.0 + eps, eps / 10.0)));
    });
    rep.close("A03a", "d2s/dbeta2 jump at beta_+", jump2, 0.125, 0.01, secs);
    rep.close("A03b", "d2s/dbeta2 jump at beta=-2 (metastable; published value 5/32)",
              std::abs(jump_m2), 5.0 / 32.0, 0.01, secs,
              "closed-form branches give |jump| = 1/4; see ledger");
    rep.flag("A03c", "d2s/dbeta2 divergence trend at beta_g (factor >= 2 per decade)",
             div[1] >= 2.0 * div[0] && div[2] >= 2.0 * div[1]);
    rep.below("A03d", "second-order signatures runtime [s]", secs, 1.0, secs);
}

void acc_first_order(Reporter& rep) {
    const auto bm = analytic::solve_beta_minus();
    const double b = bm.beta_minus;
    const double mu2 = bm.mu_minus * bm.mu_minus;
    const auto above = analytic::thermo_negative_stable(b + 1e-12);
    const auto below = analytic::thermo_negative_stable(b - 1e-12);
    rep.close("A04a", "beta f continuity at beta_-", std::abs(above.beta_f - below.beta_f),
              0.0, 1e-8);
    rep.close("A04b", "u jump at beta_-", below.u - above.u, mu2, 1e-6);
    rep.close("A04c", "Ds/Du across the transition", (below.s - above.s) / (below.u - above.u),
              b, 1e-6);
    rep.close("A04d", "s_S = ln(1-mu_-) - 1/2", below.s, -1.75643, 1e-4);
}

void acc_pure_moments_mc(Reporter& rep, std::uint64_t seed, int workers) {
    (void)workers;
    const long long samples = 100000;
    const double secs = timed([&] {
        int idx = 0;
        for (auto [n, m] : {std::pair{2, 2}, {2, 4}, {4, 4}, {3, 5}}) {
            sampling::CounterRng rng({seed, 100 + static_cast<std::uint64_t>(idx)});
            const BipartiteDims dims(n, m);
            double sum = 0.0, sumsq = 0.0;
            for (long long s = 0; s < samples; ++s) {
                const double p = purity(sampling::reduced_spectrum(dims, rng));
                sum += p;
                sumsq += p * p;
            }
            const double mean = sum / samples;
            const double var = (sumsq - samples * mean * mean) / (samples - 1);
            const double k1 = moments::pure_first_moment(n, m);
            const double k2 = moments::pure_second_cumulant(n, m);
            const double se_mean = std::sqrt(var / samples);
            // se of the sample variance of an approximately normal statistic
            const double se_var = var * std::sqrt(2.0 / (samples - 1));
            const std::string tag = std::to_string(n) + "x" + std::to_string(m);
            rep.close("A05a-" + tag, "MC mean purity vs K1 (" + tag + ")", mean, k1,
                      3.0 * se_mean);
            rep.close("A05b-" + tag, "MC purity variance vs K2 (" + tag + ")", var, k2,
                      4.0 * se_var);
            ++idx;
        }
    });
    rep.below("A05c", "pure-moment MC runtime [s]", secs, 60.0, secs);
}

void acc_mixed_first_moment(Reporter& rep, std::uint64_t seed, int workers) {
    const BipartiteDims dims(4, 4);
    sampling::BinnedEnsemble ens;
    const double secs = timed([&] {
        ens = sampling::purified_mixed_ensemble(dims, 200000, 40, {seed, 500}, workers);
    });
    double chi2 = 0.0;
    int dof = 0;
    for (std::size_t b = 0; b < ens.counts.size(); ++b) {
        if (ens.counts[b] < 25) continue;
        const double pred = moments::mixed_first_moment(ens.mean_x[b], 4, 4);
        const double se = std::sqrt(ens.var_piA[b] / ens.counts[b]);
        const double z = (ens.mean_piA[b] - pred) / se;
        chi2 += z * z;
        ++dof;
    }
    const double p = stats::chi_square_sf(chi2, dof);
    rep.flag("A06a",
             "per-bin mean pi_A vs mixed first moment, chi2 p-value > 0.01 (p = " +
                 std::to_string(p) + ", dof = " + std::to_string(dof) + ")",
             p > 0.01);
    rep.below("A06b", "purified-ensemble runtime [s]", secs, 300.0, secs);
}

void acc_weingarten_twirl(Reporter& rep, std::uint64_t seed, int workers) {
    (void)workers;
    const double secs = timed([&] {
        // every order-2 index pattern over a two-letter alphabet
        for (int l : {3, 4, 5}) {
            std::vector<moments::MonomialPairing> patterns;
            for (int mask = 0; mask < 256; ++mask) {
                moments::MonomialPairing p;
                p.row = {(mask >> 0) & 1, (mask >> 1) & 1};
                p.col = {(mask >> 2) & 1, (mask >> 3) & 1};
                p.drow = {(mask >> 4) & 1, (mask >> 5) & 1};
                p.dcol = {(mask >> 6) & 1, (mask >> 7) & 1};
                patterns.push_back(p);
            }
            const long long samples = 200000;
            const int batches = 25;
            const long long per_batch = samples / batches;
            std::vector<std::vector<std::complex<double>>> batch_means(
                patterns.size(), std::vector<std::complex<double>>(batches));
            sampling::CounterRng rng({seed, 600 + static_cast<std::uint64_t>(l)});
            for (int b = 0; b < batches; ++b) {
                std::vector<std::complex<double>> acc(patterns.size(), {0.0, 0.0});
                for (long long s = 0; s < per_batch; ++s) {
                    const Eigen::MatrixXcd u = sampling::haar_unitary(l, rng);
                    for (std::size_t k = 0; k < patterns.size(); ++k) {
                        const auto& p = patterns[k];
                        acc[k] += u(p.row[0], p.col[0]) * u(p.row[1], p.col[1]) *
                                  std::conj(u(p.dcol[0], p.drow[0])) *
                                  std::conj(u(p.dcol[1], p.drow[1]));
                    }
                }
                for (std::size_t k = 0; k < patterns.size(); ++k)
                    batch_means[k][b] = acc[k] / static_cast<double>(per_batch);
            }
            double worst = 0.0;
            for (std::size_t k = 0; k < patterns.size(); ++k) {
                std::complex<double> mean{0.0, 0.0};
                for (const auto& bm : batch_means[k]) mean += bm;
                mean /= static_cast<double>(batches);
                double var = 0.0;
                for (const auto& bm : batch_means[k]) var += std::norm(bm - mean);
                var /= (batches - 1);
                const double se = std::sqrt(var / batches) + 1e-15;
                const double pred = moments::weingarten_prediction(l, patterns[k]);
                worst = std::max(worst, std::abs(mean - pred) / (3.0 * se));
            }
            rep.below("A07a-l" + std::to_string(l),
                      "order-2 monomials vs Weingarten, worst |err|/(3 se), l=" +
                          std::to_string(l),
                      worst, 1.0);
        }
        // twirl of |psi><psi| x |psi><psi|
        for (int l : {2, 3, 4}) {
            sampling::CounterRng rng({seed, 700 + static_cast<std::uint64_t>(l)});
            const Eigen::VectorXcd psi = sampling::haar_state(l, rng);
            const Eigen::MatrixXcd proj = psi * psi.adjoint();
            Eigen::MatrixXcd theta(l * l, l * l);
            for (int i = 0; i < l; ++i)
                for (int j = 0; j < l; ++j)
                    for (int k = 0; k < l; ++k)
                        for (int m = 0; m < l; ++m)
                            theta(i * l + j, k * l + m) = proj(i, k) * proj(j, m);
            Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(l * l, l * l);
            const double L = l;
            for (int a = 0; a < l * l; ++a) expected(a, a) += 1.0 / (L * (L + 1.0));
            for (int i = 0; i < l; ++i)
                for (int j = 0; j < l; ++j)
                    expected(i * l + j, j * l + i) += 1.0 / (L * (L + 1.0));
            const double err =
                (moments::twirl2(theta, l) - expected).cwiseAbs().maxCoeff();
            rep.below("A07b-l" + std::to_string(l),
                      "twirl2(psi^2) = (I+S)/(L(L+1)), max err, l=" + std::to_string(l), err,
                      1e-12);
        }
        // MC twirl vs analytic twirl at l = 3
        {
            const int l = 3;
            sampling::CounterRng rng({seed, 800});
            Eigen::MatrixXcd theta(l * l, l * l);
            for (int a = 0; a < l * l; ++a)
                for (int b = 0; b < l * l; ++b)
                    theta(a, b) = std::complex<double>(rng.normal(), rng.normal());
            const auto analytic_tw = moments::twirl2(theta, l);
            const long long samples = 20000;
            const int batches = 20;
            std::vector<Eigen::MatrixXcd> bms;
            for (int b = 0; b < batches; ++b)
                bms.push_back(moments::twirl2_mc(theta, l, samples / batches,
                                                 {seed, 900 + static_cast<std::uint64_t>(b)}));
            Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(l * l, l * l);
            for (const auto& m : bms) mean += m;
            mean /= static_cast<double>(batches);
            double worst = 0.0;
            for (int a = 0; a < l * l; ++a)
                for (int c = 0; c < l * l; ++c) {
                    double var = 0.0;
                    for (const auto& m : bms) var += std::norm(m(a, c) - mean(a, c));
                    var /= (batches - 1);
                    const double se = std::sqrt(var / batches) + 1e-15;
                    worst = std::max(worst,
                                     std::abs(mean(a, c) - analytic_tw(a, c)) / (4.0 * se));
                }
            rep.below("A07c", "MC twirl vs analytic twirl, worst |err|/(4 se)", worst, 1.0);
        }
    });
    rep.below("A07d", "Weingarten/twirl runtime [s]", secs, 120.0, secs);
}

void acc_second_moment(Reporter& rep, std::uint64_t seed) {
    for (auto [n, m] : {std::pair{2, 2}, {2, 3}, {3, 3}}) {
        const long long L = static_cast<long long>(n) * m;
        const Spectrum mm(std::vector<double>(L, 1.0 / L));
        rep.close("A08a-" + std::to_string(n) + "x" + std::to_string(m),
                  "M2 at the maximally mixed spectrum = 1/n^2",
                  moments::mixed_second_moment_given_spectrum(mm, n, m),
                  1.0 / (static_cast<double>(n) * n), 1e-12);
    }
    for (auto [n, m] : {std::pair{2, 2}, {2, 3}, {3, 3}}) {
        std::vector<double> v(static_cast<std::size_t>(n) * m, 0.0);
        v[0] = 1.0;
        const Spectrum pure(v);
        const double lhs = moments::mixed_second_moment_given_spectrum(pure, n, m);
        const double rhs = moments::pure_second_cumulant(n, m) +
                           moments::pure_first_moment(n, m) * moments::pure_first_moment(n, m);
        rep.close("A08b-" + std::to_string(n) + "x" + std::to_string(m),
                  "M2 at a pure spectrum = K2 + M1^2", lhs, rhs, 1e-12);
    }
    {
        // MC oracle: average pi_A over Haar rotations of the fixed spectrum
        const int n = 2, m = 2, l = 4;
        const std::vector<double> lam{0.7, 0.3, 0.0, 0.0};
        const long long samples = 100000;
        const int batches = 20;
        sampling::CounterRng rng({seed, 1000});
        std::vector<double> bmeans(batches, 0.0);
        for (int b = 0; b < batches; ++b) {
            double acc = 0.0;
            for (long long s = 0; s < samples / batches; ++s) {
                const Eigen::MatrixXcd u = sampling::haar_unitary(l, rng);
                Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(l, l);
                for (int k = 0; k < l; ++k)
                    rho.noalias() += lam[k] * u.col(k) * u.col(k).adjoint();
                Eigen::Matrix2cd rho_a = Eigen::Matrix2cd::Zero();
                for (int i = 0; i < n; ++i)
                    for (int i2 = 0; i2 < n; ++i2)
                        for (int bb = 0; bb < m; ++bb)
                            rho_a(i, i2) += rho(i * m + bb, i2 * m + bb);
                const double pi_a = rho_a.squaredNorm();
                acc += pi_a * pi_a;
            }
            bmeans[b] = acc / (samples / batches);
        }
        const auto mv = stats::mean_var(bmeans);
        const double se = std::sqrt(mv.var / batches);
        const double exact = moments::mixed_second_moment_given_spectrum(
            Spectrum(lam), n, m);
        rep.close("A08c", "M2 closed form vs unitary-average MC at (0.7,0.3,0,0)", mv.mean,
                  exact, 3.0 * se);
    }
}

void acc_mcmc(Reporter& rep, std::uint64_t seed) {
    const double secs = timed([&] {
        {
            const int n = 16;
            const auto samples =
                sampling::canonical_mcmc_collect(n, 0.0, 4000, {seed, 1100});
            std::vector<double> pooled;
            for (const auto& s : samples)
                for (double v : s.values()) pooled.push_back(v * n);
            const double d = stats::ks_statistic(pooled, wishart_cdf);
            const double gate =
                stats::ks_critical_one_sample(static_cast<double>(pooled.size())) + 1.0 / n;
            rep.below("A09a", "MCMC beta=0 n=16: KS vs Wishart (finite-N allowance 1/n)", d,
                      gate);
        }
        {
            const int n = 24;
            const double beta3 = 4.0;
            const double beta_scaled = beta3 * n * n * n;
            const auto samples =
                sampling::canonical_mcmc_collect(n, beta_scaled, 3000, {seed, 1200});
            std::vector<double> pooled;
            for (const auto& s : samples)
                for (double v : s.values()) pooled.push_back(v * n);
            const double radius = std::sqrt(2.0 / beta3);
            const double d = stats::ks_statistic(
                pooled, [&](double x) { return semicircle_cdf(x, 1.0, radius); });
            const double gate =
                stats::ks_critical_one_sample(static_cast<double>(pooled.size())) + 1.0 / n;
            rep.below("A09b", "MCMC beta*N^3, beta=4, n=24: KS vs semicircle", d, gate);
        }
    });
    rep.below("A09c", "MCMC runtime [s]", secs, 600.0, secs);
}

void acc_coulomb(Reporter& rep) {
    double crossing = 0.0;
    const double secs = timed([&] {
        crossing = coulomb::locate_crossing(30, -2.5, -1.8, 1e-3);
    });
    rep.close("A10a", "finite-N stability swap at n=30", crossing, -1.935, 0.05, secs);

    const auto bm = analytic::solve_beta_minus();
    double secs2 = 0.0;
    double worst = 0.0;
    secs2 = timed([&] {
        const int n = 40;
        std::vector<double> grid;
        for (double b = -4.0; b <= -0.5 + 1e-9; b += 0.1) grid.push_back(b);
        const auto rows = coulomb::max_eigenvalue_curve(n, grid);
        for (const auto& r : rows) {
            if (std::abs(r.beta - bm.beta_minus) < 0.1) continue;
            double ref, measured;
            if (r.beta < bm.beta_minus) {
                ref = analytic::evaporated_mu(r.beta);
                measured = r.lambda_max_separable;
            } else {
                ref = 2.0 / n * analytic::wishart_delta_meta(r.beta / n);
                measured = r.lambda_max_typical;
            }
            worst = std::max(worst, std::abs(measured - ref));
        }
    });
    rep.below("A10b", "n=40 lambda_max vs branch formula, max |dev| (excl. +-0.1 of beta_-)",
              worst, 0.03, secs2);
    rep.below("A10c", "finite-N suite runtime [s]", secs + secs2, 1800.0, secs + secs2);
}

void acc_gradient(Reporter& rep, std::uint64_t seed) {
    double worst = 0.0;
    for (int n : {4, 8, 16}) {
        sampling::CounterRng rng({seed, 1300 + static_cast<std::uint64_t>(n)});
        for (int trial = 0; trial < 10; ++trial) {
            // random interior points, kept away from coincidences so the
            // h = 1e-7 stencil stays in the quadratic regime
            std::vector<double> lam;
            for (;;) {
                lam = sampling::simplex_uniform(n, rng).values();
                double min_gap = 1e9;
                for (std::size_t i = 0; i + 1 < lam.size(); ++i)
                    min_gap = std::min(min_gap, lam[i] - lam[i + 1]);
                if (min_gap > 1e-3) break;
            }
            const auto g = coulomb::finite_free_energy_gradient(lam, -1.3, n);
            const double h = 1e-7;
            for (int i = 0; i < n; ++i) {
                auto lp = lam, lm = lam;
                lp[i] += h;
                lm[i] -= h;
                // raw beta f_N (no simplex projection: coordinate-wise partials)
                auto raw = [&](const std::vector<double>& v) {
                    double quad = 0.0, logsum = 0.0;
                    for (double x : v) quad += x * x;
                    for (int a = 0; a < n; ++a)
                        for (int b = a + 1; b < n; ++b)
                            logsum += std::log(std::abs(v[a] - v[b]));
                    return -1.3 * quad - 2.0 / (static_cast<double>(n) * n) * logsum;
                };
                const double fd = (raw(lp) - raw(lm)) / (2.0 * h);
                worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
            }
        }
    }
    rep.below("A11", "analytic gradient vs central differences, worst rel err", worst, 1e-5);
}

void acc_simplex(Reporter& rep, std::uint64_t seed) {
    for (int l : {4, 8, 32}) {
        sampling::CounterRng rng({seed, 1400 + static_cast<std::uint64_t>(l)});
        const long long samples = 100000;
        double s1 = 0.0, s2 = 0.0, s11 = 0.0;
        for (long long s = 0; s < samples; ++s) {
            const Spectrum sp = sampling::simplex_uniform(l, rng);
            // exchangeable coordinates: pick random positions of the sorted
            // vector so the symmetric moment formulas apply
            const auto i = rng.uniform_index(l);
            auto j = rng.uniform_index(l - 1);
            if (j >= i) ++j;
            s1 += sp[i];
            s2 += sp[i] * sp[i];
            s11 += sp[i] * sp[j];
        }
        const double m1 = s1 / samples, m2 = s2 / samples, m11 = s11 / samples;
        const double e1 = 1.0 / l;
        const double e2 = 2.0 / (static_cast<double>(l) * (l + 1));
        const double e11 = 1.0 / (static_cast<double>(l) * (l + 1));
        // moment standard errors from the flat-Dirichlet higher moments
        const double se1 = std::sqrt((e2 - e1 * e1) / samples);
        const double var2 = 24.0 / (static_cast<double>(l) * (l + 1) * (l + 2) * (l + 3)) -
                            e2 * e2;
        const double se2 = std::sqrt(var2 / samples);
        const double var11 =
            4.0 / (static_cast<double>(l) * (l + 1) * (l + 2) * (l + 3)) - e11 * e11;
        const double se11 = std::sqrt(var11 / samples);
        const std::string tag = "-l" + std::to_string(l);
        rep.close("A12a" + tag, "simplex E[x_i]", m1, e1, 3.0 * se1);
        rep.close("A12b" + tag, "simplex E[x_i^2]", m2, e2, 3.0 * se2);
        rep.close("A12c" + tag, "simplex E[x_i x_j]", m11, e11, 3.0 * se11);
    }
}

void acc_gravity_expansion(Reporter& rep) {
    const double bg = -2.0 / 27.0;
    const double c1 = (analytic::thermo_metastable(bg + 1e-3).beta_f -
                       analytic::thermo_metastable(bg).beta_f) /
                      1e-3;
    rep.close("A13a", "d(beta f)/dbeta at beta_g+ = 9/4 (1%)", c1, 2.25, 0.0225);
    const double eps = 4e-7, h = 2e-7;
    const double c2 = (analytic::metastable_dbetaf_dbeta(bg + eps + h) -
                       analytic::metastable_dbetaf_dbeta(bg + eps - h)) /
                      (2.0 * h) / 2.0;
    rep.close("A13b", "quadratic coefficient of beta f at beta_g = -81/16 (1%)", c2,
              -81.0 / 16.0, 81.0 / 16.0 * 0.01);
}

// ------------------------------------------------------- module invariants

void suite_analytic(Reporter& rep, Budget budget, std::uint64_t seed) {
    const auto bm = analytic::solve_beta_minus();
    rep.close("an-beta-minus", "transcendental root", bm.mu_minus, 0.71533, 1e-4);
    rep.close("an-jump-2",
              "d2s/dbeta2 jump at beta_+",
              d2s(stable_s, 2.002, 1e-3) - d2s(stable_s, 1.998, 1e-3), 0.125, 0.01);
    rep.close("an-mu-consistency", "mu(beta_-) equals mu_-",
              analytic::evaporated_mu(bm.beta_minus), bm.mu_minus, 1e-6);

    // normalization and trace of the Tricomi density over random feasible points
    sampling::CounterRng rng({seed, 1500});
    const int pts = budget == Budget::Full ? 200 : 30;
    double worst_norm = 0.0, worst_trace = 0.0, worst_neg = 0.0;
    for (double beta : {-5.0, -2.0, -0.074, 0.0, 1.0, 2.0, 5.0}) {
        const auto dom = analytic::feasible_domain(beta);
        for (int k = 0; k < pts; ++k) {
            const double d = dom.delta_max * (0.05 + 0.9 * rng.uniform());
            const double lo = dom.lower(d), hi = dom.upper(d);
            if (hi <= lo) continue;
            const double m = lo + (hi - lo) * rng.uniform();
            const SupportParams p(m, d, beta);
            const double norm = gauss_chebyshev(
                [&](double x) {
                    return analytic::tricomi_density(p, x) * std::sqrt(1.0 - x * x);
                },
                64);
            worst_norm = std::max(worst_norm, std::abs(norm - 1.0));
            const double trace = gauss_chebyshev(
                [&](double x) {
                    return (p.m_center + p.delta * x) * analytic::tricomi_density(p, x) *
                           std::sqrt(1.0 - x * x);
                },
                64);
            worst_trace = std::max(worst_trace, std::abs(trace - 1.0));
        }
    }
    rep.below("an-norm", "density normalization over random feasible points", worst_norm,
              1e-8);
    rep.below("an-trace", "trace constraint over random feasible points", worst_trace, 1e-8);

    // nonnegativity on branch parameters
    for (double beta : {5.0, 2.0, 1.0, 0.5, 0.0}) {
        auto [p, id, ev] = analytic::stable_branch(beta);
        for (int i = 1; i < 1000; ++i) {
            const double x = -1.0 + 2.0 * i / 1000.0;
            worst_neg = std::min(worst_neg, analytic::tricomi_density(p, x));
        }
    }
    for (double beta : {-0.05, -2.0 / 27.0, -0.08, -1.0, -3.0}) {
        auto [p, id] = analytic::metastable_branch(beta);
        for (int i = 1; i < 1000; ++i) {
            const double x = -1.0 + 2.0 * i / 1000.0;
            worst_neg = std::min(worst_neg, analytic::tricomi_density(p, x));
        }
    }
    rep.below("an-nonneg", "density nonnegativity on branch parameters", -worst_neg, 1e-12);

    // continuity of u and s across beta_+
    rep.close("an-cont-u", "u continuity at beta_+",
              analytic::thermo_stable(2.0 + 1e-13).u - analytic::thermo_stable(2.0 - 1e-13).u,
              0.0, 1e-10);
    rep.close("an-cont-s", "s continuity at beta_+",
              analytic::thermo_stable(2.0 + 1e-13).s - analytic::thermo_stable(2.0 - 1e-13).s,
              0.0, 1e-10);

    // ds/du = beta along stable branch segments (Maxwell relation)
    double worst_maxwell = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double beta = 0.2 + 4.0 * i / 100.0;
        if (std::abs(beta - 2.0) < 0.05) continue;
        const double h = 1e-5;
        const double ds = analytic::thermo_stable(beta + h).s - analytic::thermo_stable(beta - h).s;
        const double du = analytic::thermo_stable(beta + h).u - analytic::thermo_stable(beta - h).u;
        worst_maxwell = std::max(worst_maxwell, std::abs(ds / du - beta));
    }
    for (int i = 1; i < 50; ++i) {
        const double beta = bm.beta_minus - 0.02 - 3.0 * i / 50.0;
        const double h = 1e-6;
        const auto a = analytic::thermo_negative_stable(beta + h);
        const auto b = analytic::thermo_negative_stable(beta - h);
        worst_maxwell = std::max(worst_maxwell, std::abs((a.s - b.s) / (a.u - b.u) - beta));
    }
    for (int i = 1; i < 50; ++i) {
        const double beta = -0.073 + 0.071 * i / 50.0;  // meta-Wishart window
        const double h = 1e-7;
        const auto a = analytic::thermo_metastable(beta + h);
        const auto b = analytic::thermo_metastable(beta - h);
        worst_maxwell = std::max(worst_maxwell, std::abs((a.s - b.s) / (a.u - b.u) - beta));
    }
    rep.below("an-maxwell", "ds/du = beta on stable and meta-Wishart segments",
              worst_maxwell, 1e-4);

    // parametric/explicit consistency of s(u)
    double worst_su = 0.0;
    for (double beta : {0.3, 0.9, 1.7, 2.5, 4.0, 9.0}) {
        const auto tp = analytic::thermo_stable(beta);
        worst_su = std::max(worst_su,
                            std::abs(analytic::entropy_vs_u(
                                         tp.u, analytic::BranchFamily::PositiveStable) -
                                     tp.s));
    }
    rep.below("an-su", "entropy_vs_u consistency with thermo on the stable branch", worst_su,
              1e-10);

    // stable and metastable branches share the Wishart continuation
    double worst_share = 0.0;
    for (double beta : {-0.01, -0.03, -0.06}) {
        auto [pm, idm] = analytic::metastable_branch(beta);
        worst_share = std::max(
            worst_share, std::abs(analytic::wishart_delta_meta(beta) - pm.delta));
    }
    rep.below("an-share", "metastable Wishart continuation is the shared family",
              worst_share, 1e-12);
}

void suite_moments(Reporter& rep, Budget budget, std::uint64_t seed, int workers) {
    rep.close("mo-affine", "mixed_first_moment(1) = pure_first_moment",
              moments::mixed_first_moment(1.0, 3, 5), moments::pure_first_moment(3, 5),
              1e-14);
    // monotonicity in x
    bool monotone = true;
    double prev = -1.0;
    for (int i = 0; i <= 50; ++i) {
        const double x = 1.0 / 15.0 + (1.0 - 1.0 / 15.0) * i / 50.0;
        const double v = moments::mixed_first_moment(x, 3, 5);
        if (v <= prev) monotone = false;
        prev = v;
    }
    rep.flag("mo-monotone", "mixed_first_moment affine increasing in x", monotone);

    // twirl properties
    sampling::CounterRng rng({seed, 1600});
    const int l = 3;
    Eigen::MatrixXcd theta(l * l, l * l);
    for (int a = 0; a < l * l; ++a)
        for (int b = 0; b < l * l; ++b)
            theta(a, b) = std::complex<double>(rng.normal(), rng.normal());
    const auto t1 = moments::twirl2(theta, l);
    rep.below("mo-idem", "twirl2 idempotent",
              (moments::twirl2(t1, l) - t1).cwiseAbs().maxCoeff(), 1e-12);
    rep.below("mo-trace", "twirl2 trace preserving",
              std::abs(t1.trace() - theta.trace()), 1e-12);
    double worst_comm = 0.0;
    const int n_unitaries = budget == Budget::Full ? 20 : 5;
    for (int k = 0; k < n_unitaries; ++k) {
        const Eigen::MatrixXcd v = sampling::haar_unitary(l, rng);
        Eigen::MatrixXcd vv(l * l, l * l);
        for (int i = 0; i < l; ++i)
            for (int j = 0; j < l; ++j)
                for (int a = 0; a < l; ++a)
                    for (int b = 0; b < l; ++b)
                        vv(i * l + a, j * l + b) = v(i, j) * v(a, b);
        worst_comm = std::max(worst_comm,
                              (vv * t1 - t1 * vv).cwiseAbs().maxCoeff());
    }
    rep.below("mo-comm", "twirl2 output commutes with V x V", worst_comm, 1e-10);

    // Weingarten vs MC (quick: l = 4 only, |U11|^2 / |U11|^4 patterns)
    {
        const long long samples = budget == Budget::Full ? 200000 : 30000;
        moments::MonomialPairing p4{{0, 0}, {0, 0}, {0, 0}, {0, 0}};
        const auto est = moments::unitary_monomial_mc(4, p4, samples, {seed, 1700}, workers);
        rep.close("mo-wg-mc", "<|U11|^4> vs Weingarten at l=4", est.estimate.real(),
                  moments::weingarten_prediction(4, p4), 3.0 * est.stderr_ + 1e-12);
    }
    // variance positivity over sampled ensembles
    {
        const BipartiteDims dims(3, 3);
        const auto ens = sampling::purified_mixed_ensemble(
            dims, budget == Budget::Full ? 20000 : 4000, 20, {seed, 1800}, workers);
        double worst = 0.0;
        for (std::size_t b = 0; b < ens.counts.size(); ++b) {
            if (ens.counts[b] < 50) continue;
            worst = std::min(worst,
                             moments::mixed_second_cumulant(ens.mean_x[b], 3, 3,
                                                            ens.mean_t3[b], ens.mean_t4[b]));
        }
        rep.below("mo-k2-pos", "mixed second cumulant nonnegative on sampled (x,t3,t4)",
                  -worst, 1e-12);
    }
}

void suite_sampling(Reporter& rep, Budget budget, std::uint64_t seed) {
    // unitarity residual
    double worst_unit = 0.0;
    {
        sampling::CounterRng rng({seed, 1900});
        for (int l : {2, 8, 64}) {
            const Eigen::MatrixXcd u = sampling::haar_unitary(l, rng);
            worst_unit = std::max(
                worst_unit,
                (u.adjoint() * u - Eigen::MatrixXcd::Identity(l, l)).cwiseAbs().maxCoeff());
        }
    }
    rep.below("sa-unitary", "unitarity residual up to l=64", worst_unit, 1e-12);

    // left invariance of |U11|^2 (two-sample KS)
    {
        sampling::CounterRng rng({seed, 2000});
        const int l = 6;
        const Eigen::MatrixXcd v = sampling::haar_unitary(l, rng);
        const long long draws = budget == Budget::Full ? 10000 : 3000;
        std::vector<double> a, b;
        for (long long s = 0; s < draws; ++s) {
            const Eigen::MatrixXcd u = sampling::haar_unitary(l, rng);
            a.push_back(std::norm(u(0, 0)));
            b.push_back(std::norm((v * u)(0, 0)));
        }
        const double d = stats::ks_two_sample(a, b);
        rep.below("sa-invariance", "left invariance two-sample KS",
                  d, stats::ks_critical_two_sample(draws, draws));
    }

    // modulus law p_L(r) at l = 16
    {
        sampling::CounterRng rng({seed, 2100});
        const int l = 16;
        const long long draws = budget == Budget::Full ? 20000 : 5000;
        std::vector<double> r;
        for (long long s = 0; s < draws; ++s) {
            const Eigen::MatrixXcd u = sampling::haar_unitary(l, rng);
            r.push_back(std::abs(u(0, 0)));
        }
        const double d = stats::ks_statistic(r, [l](double x) {
            return 1.0 - std::pow(1.0 - x * x, l - 1);
        });
        rep.below("sa-modulus", "single-element modulus law at l=16",
                  d, stats::ks_critical_one_sample(static_cast<double>(draws)));
    }

    // simplex vs uniform-spacings Dirichlet construction
    {
        sampling::CounterRng rng({seed, 2200});
        const int l = 6;
        const long long draws = budget == Budget::Full ? 20000 : 5000;
        std::vector<double> a, b;
        for (long long s = 0; s < draws; ++s) {
            a.push_back(sampling::simplex_uniform(l, rng)[0]);
            // spacings of l-1 sorted uniforms (independent construction)
            std::vector<double> u(l - 1);
            for (double& x : u) x = rng.uniform();
            std::sort(u.begin(), u.end());
            std::vector<double> sp(l);
            sp[0] = u[0];
            for (int k = 1; k < l - 1; ++k) sp[k] = u[k] - u[k - 1];
            sp[l - 1] = 1.0 - u[l - 2];
            b.push_back(*std::max_element(sp.begin(), sp.end()));
        }
        // compare the largest coordinate (Spectrum sorts descending)
        const double d = stats::ks_two_sample(a, b);
        rep.below("sa-dirichlet", "simplex sampler vs uniform-spacings construction",
                  d, stats::ks_critical_two_sample(draws, draws));
    }

    // detailed-balance smoke test on n=3 with a coarse discretization
    if (budget == Budget::Full) {
        const int n = 3;
        const int grid = 14;
        std::vector<double> emp(grid * grid, 0.0);
        long long kept = 0;
        sampling::McmcOptions opt;
        opt.burn_in = 200000;
        opt.thin = 4;
        sampling::canonical_mcmc(n, 0.0, 5000000, {seed, 2300},
                                 [&](const std::vector<double>& lam) {
                                     // sorted descending; state is (l1, l2)
                                     const int i = std::min(
                                         grid - 1, static_cast<int>(lam[0] * grid));
                                     const int j = std::min(
                                         grid - 1, static_cast<int>(lam[1] * grid));
                                     emp[i * grid + j] += 1.0;
                                     ++kept;
                                 },
                                 opt);
        // target density on sorted coords: prod (li-lj)^2, normalized on cells;
        // only cells fully inside the sorted sector enter the comparison, so
        // the jagged-boundary quadrature error cannot masquerade as bias
        std::vector<double> target(grid * grid, 0.0);
        std::vector<bool> interior(grid * grid, false);
        double tsum = 0.0;
        const int sub = 16;
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                double acc = 0.0;
                int inside = 0;
                for (int a = 0; a < sub; ++a)
                    for (int b = 0; b < sub; ++b) {
                        const double l1 = (i + (a + 0.5) / sub) / grid;
                        const double l2 = (j + (b + 0.5) / sub) / grid;
                        const double l3 = 1.0 - l1 - l2;
                        if (l3 < 0.0 || l2 > l1 || l3 > l2) continue;
                        ++inside;
                        const double w = (l1 - l2) * (l1 - l2) * (l1 - l3) * (l1 - l3) *
                                         (l2 - l3) * (l2 - l3);
                        acc += w;
                    }
                target[i * grid + j] = acc;
                interior[i * grid + j] = inside == sub * sub;
                tsum += acc;
            }
        double worst = 0.0;
        for (int c = 0; c < grid * grid; ++c) {
            const double t = target[c] / tsum;
            if (!interior[c] || t < 0.02) continue;  // cells carrying real mass
            const double e = emp[c] / kept;
            worst = std::max(worst, std::abs(e - t) / t);
        }
        rep.below("sa-balance", "MCMC stationary distribution vs target (n=3, coarse grid)",
                  worst, 0.05);
    }

    // reproducibility under identical RngSpec and worker counts
    {
        const BipartiteDims dims(2, 2);
        const auto e1 = sampling::purified_mixed_ensemble(dims, 2000, 10, {seed, 2400}, 2);
        const auto e2 = sampling::purified_mixed_ensemble(dims, 2000, 10, {seed, 2400}, 2);
        bool same = e1.total == e2.total;
        for (std::size_t b = 0; same && b < e1.counts.size(); ++b)
            same = e1.counts[b] == e2.counts[b] && e1.mean_piA[b] == e2.mean_piA[b];
        rep.flag("sa-repro", "bit-identical rerun for fixed (seed, workers)", same);
    }
}

void suite_coulomb(Reporter& rep, Budget budget, std::uint64_t seed) {
    // permutation invariance of the packed free energy
    {
        sampling::CounterRng rng({seed, 2500});
        const Spectrum s = sampling::simplex_uniform(8, rng);
        std::vector<double> shuffled = s.values();
        std::rotate(shuffled.begin(), shuffled.begin() + 3, shuffled.end());
        rep.close("co-perm", "beta f_N invariant under permutation",
                  coulomb::finite_free_energy(Spectrum(shuffled), -1.1, 8),
                  coulomb::finite_free_energy(s, -1.1, 8), 1e-12);
    }
    // gradient check (small n)
    {
        sampling::CounterRng rng({seed, 2600});
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            const int n = 8;
            std::vector<double> lam;
            for (;;) {
                lam = sampling::simplex_uniform(n, rng).values();
                double min_gap = 1e9;
                for (std::size_t i = 0; i + 1 < lam.size(); ++i)
                    min_gap = std::min(min_gap, lam[i] - lam[i + 1]);
                if (min_gap > 1e-3) break;
            }
            const auto g = coulomb::finite_free_energy_gradient(lam, -1.3, n);
            const double h = 1e-7;
            for (int i = 0; i < n; ++i) {
                auto lp = lam, lm = lam;
                lp[i] += h;
                lm[i] -= h;
                auto raw = [&](const std::vector<double>& v) {
                    double quad = 0.0, logsum = 0.0;
                    for (double x : v) quad += x * x;
                    for (int a = 0; a < n; ++a)
                        for (int b = a + 1; b < n; ++b)
                            logsum += std::log(std::abs(v[a] - v[b]));
                    return -1.3 * quad - 2.0 / 64.0 * logsum;
                };
                const double fd = (raw(lp) - raw(lm)) / (2.0 * h);
                worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
            }
        }
        rep.below("co-grad", "gradient vs central differences (n=8)", worst, 1e-5);
    }
    // valid spectra and descent
    {
        const auto res = coulomb::minimize_both_basins(16, -2.0);
        rep.flag("co-valid", "minimizer outputs are valid spectra",
                 res.typical.spectrum.size() == 16 && res.separable.spectrum.size() == 16);
        rep.flag("co-conv", "both basin minimizations converge (KKT residual < tol)",
                 res.typical.converged && res.separable.converged);
    }
    if (budget == Budget::Full) {
        // lambda_max * n against the analytic support edge b(beta3) for
        // beta3 >= 1 (alpha=3 scaling enters through beta2 = n * beta3).
        // The discrete edge sits O(n^{-2/3}) below b, which stays inside the
        // 10% window here but would not at the beta3 -> 0 hard-edge end.
        for (int n : {16, 64}) {
            double worst = 0.0;
            for (double beta3 : {1.0, 2.0, 4.0}) {
                const auto res = coulomb::minimize_both_basins(n, n * beta3);
                auto [p, id, ev] = analytic::stable_branch(beta3);
                const double b_edge = p.b();
                worst = std::max(
                    worst, std::abs(res.typical.spectrum.largest() * n - b_edge) / b_edge);
            }
            rep.below("co-edge-n" + std::to_string(n),
                      "lambda_max * n vs analytic b(beta), n=" + std::to_string(n), worst,
                      0.10);
        }
        // two-basin window: two local minima inside, one outside
        auto count_minima = [&](double beta) {
            std::vector<double> grid;
            for (double mu = 0.10; mu <= 0.90 + 1e-12; mu += 0.01) grid.push_back(mu);
            const auto prof = coulomb::profile_fixed_max(30, beta, grid);
            int minima = 0;
            for (std::size_t i = 1; i + 1 < prof.size(); ++i)
                if (prof[i].second < prof[i - 1].second &&
                    prof[i].second < prof[i + 1].second)
                    ++minima;
            // the typical basin sits below the grid floor; count it when the
            // profile is increasing at the left edge
            if (prof[0].second < prof[1].second) ++minima;
            return minima;
        };
        rep.flag("co-window-in", "two local minima inside the competition window (beta=-2.1)",
                 count_minima(-2.1) >= 2);
        rep.flag("co-window-out", "single local minimum outside the window (beta=-1.0)",
                 count_minima(-1.0) == 1);
    }
}

}  // namespace

Suite parse_suite(const std::string& s) {
    if (s == "analytic") return Suite::Analytic;
    if (s == "moments") return Suite::Moments;
    if (s == "sampling") return Suite::Sampling;
    if (s == "coulomb") return Suite::Coulomb;
    if (s == "all") return Suite::All;
    throw DomainError("unknown suite: " + s);
}

Budget parse_budget(const std::string& s) {
    if (s == "quick") return Budget::Quick;
    if (s == "full") return Budget::Full;
    throw DomainError("unknown budget: " + s);
}

std::vector<CheckResult> run_acceptance(std::uint64_t seed, int workers) {
    std::vector<CheckResult> out;
    Reporter rep(out);
    acc_beta_minus(rep);
    acc_landmarks(rep);
    acc_second_order(rep);
    acc_first_order(rep);
    acc_pure_moments_mc(rep, seed, workers);
    acc_mixed_first_moment(rep, seed, workers);
    acc_weingarten_twirl(rep, seed, workers);
    acc_second_moment(rep, seed);
    acc_mcmc(rep, seed);
    acc_coulomb(rep);
    acc_gradient(rep, seed);
    acc_simplex(rep, seed);
    acc_gravity_expansion(rep);
    return out;
}

std::vector<CheckResult> run(Suite suite, Budget budget, std::uint64_t seed, int workers) {
    std::vector<CheckResult> out;
    Reporter rep(out);
    if (suite == Suite::Analytic || suite == Suite::All) suite_analytic(rep, budget, seed);
    if (suite == Suite::Moments || suite == Suite::All)
        suite_moments(rep, budget, seed, workers);
    if (suite == Suite::Sampling || suite == Suite::All) suite_sampling(rep, budget, seed);
    if (suite == Suite::Coulomb || suite == Suite::All) suite_coulomb(rep, budget, seed);
    if (suite == Suite::All && budget == Budget::Full) {
        auto acc = run_acceptance(seed, workers);
        out.insert(out.end(), acc.begin(), acc.end());
    }
    return out;
}

}  // namespace entrostat::verify
