#include <doctest.h>

#include <cmath>

#include "entrostat/moments.hpp"
#include "entrostat/sampling.hpp"
#include "entrostat/stats.hpp"

using namespace entrostat;
namespace sa = entrostat::sampling;

TEST_CASE("counter rng contract") {
    sa::CounterRng a({42, 7}), b({42, 7}), c({42, 8});
    bool identical = true, distinct = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        identical = identical && (x == b.next_u64());
        distinct = distinct || (x != c.next_u64());
    }
    CHECK(identical);
    CHECK(distinct);
    sa::CounterRng d({1, 2});
    for (int i = 0; i < 1000; ++i) {
        const double u = d.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("haar unitaries are unitary and invariant") {
    sa::CounterRng rng({5, 0});
    for (int l : {1, 2, 7, 32, 64}) {
        const Eigen::MatrixXcd u = sa::haar_unitary(l, rng);
        const double resid =
            (u.adjoint() * u - Eigen::MatrixXcd::Identity(l, l)).cwiseAbs().maxCoeff();
        CHECK(resid < 1e-12);
    }
    // l = 1: a phase
    const Eigen::MatrixXcd u1 = sa::haar_unitary(1, rng);
    CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-14);

    // <|U11|^2> = 1/5 at l = 5
    const int l = 5, draws = 20000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double v = std::norm(sa::haar_unitary(l, rng)(0, 0));
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sumsq / draws - mean * mean) / draws);
    CHECK(std::abs(mean - 0.2) < 3.0 * se);

    // modulus law at l = 16: F(r) = 1 - (1-r^2)^(l-1)
    std::vector<double> r;
    for (int i = 0; i < 5000; ++i) r.push_back(std::abs(sa::haar_unitary(16, rng)(1, 2)));
    const double d = stats::ks_statistic(
        r, [](double x) { return 1.0 - std::pow(1.0 - x * x, 15); });
    CHECK(d < stats::ks_critical_one_sample(5000));
}

TEST_CASE("reduced spectra") {
    sa::CounterRng rng({6, 0});
    const Spectrum one = sa::reduced_spectrum(BipartiteDims(1, 6), rng);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == doctest::Approx(1.0));

    // mean purity at (4,4) matches the exact first moment
    const int draws = 20000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double p = purity(sa::reduced_spectrum(BipartiteDims(4, 4), rng));
        sum += p;
        sumsq += p * p;
    }
    const double mean = sum / draws;
    const double var = (sumsq - draws * mean * mean) / (draws - 1);
    CHECK(std::abs(mean - moments::pure_first_moment(4, 4)) < 3.0 * std::sqrt(var / draws));
    CHECK(var == doctest::Approx(moments::pure_second_cumulant(4, 4)).epsilon(0.1));
}

TEST_CASE("empirical reduced-spectrum density approaches the wishart law") {
    sa::CounterRng rng({8, 0});
    const int n = 32;
    std::vector<double> pooled;
    for (int i = 0; i < 2000; ++i) {
        const Spectrum s = sa::reduced_spectrum(BipartiteDims(n, n), rng);
        for (double v : s.values()) pooled.push_back(v * n);
    }
    const double d = stats::ks_statistic(pooled, [](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 4.0) return 1.0;
        const double r = std::sqrt(x / 4.0);
        return 2.0 / kPi * (std::asin(r) + r * std::sqrt(1.0 - x / 4.0));
    });
    CHECK(d < stats::ks_critical_one_sample(static_cast<double>(pooled.size())) + 1.0 / n);
}

TEST_CASE("uniform simplex sampler moments") {
    sa::CounterRng rng({9, 0});
    const int l = 8, draws = 50000;
    double s1 = 0.0, s2 = 0.0, s11 = 0.0;
    for (int d = 0; d < draws; ++d) {
        const Spectrum sp = sa::simplex_uniform(l, rng);
        // random positions make the sorted coordinates exchangeable again
        const auto i = rng.uniform_index(l);
        auto j = rng.uniform_index(l - 1);
        if (j >= i) ++j;
        s1 += sp[i];
        s2 += sp[i] * sp[i];
        s11 += sp[i] * sp[j];
    }
    CHECK(std::abs(s1 / draws - 1.0 / 8.0) < 0.002);
    CHECK(std::abs(s2 / draws - 1.0 / 36.0) < 0.001);
    CHECK(std::abs(s11 / draws - 1.0 / 72.0) < 0.0005);
    CHECK_THROWS_AS(sa::simplex_uniform(0, rng), DomainError);
}

TEST_CASE("purified ensemble behavior") {
    const BipartiteDims dims(3, 3);
    const auto ens = sa::purified_mixed_ensemble(dims, 20000, 30, {10, 0}, 2);
    CHECK(ens.total == 20000);
    long long count_sum = 0;
    for (auto c : ens.counts) count_sum += c;
    CHECK(count_sum == ens.total);

    // per-bin mean pi_A follows the affine law in x
    for (std::size_t b = 0; b < ens.counts.size(); ++b) {
        if (ens.counts[b] < 500) continue;
        const double pred = moments::mixed_first_moment(ens.mean_x[b], 3, 3);
        const double se = std::sqrt(ens.var_piA[b] / ens.counts[b]);
        CHECK(std::abs(ens.mean_piA[b] - pred) < 4.0 * se);
    }

    // t3 self-consistency: global average equals count-weighted bin average
    double t3_binned = 0.0;
    for (std::size_t b = 0; b < ens.counts.size(); ++b)
        t3_binned += ens.mean_t3[b] * ens.counts[b];
    t3_binned /= ens.total;
    CHECK(t3_binned > 0.0);
    CHECK(t3_binned < 1.0);

    // reproducibility across reruns with the same spec and worker count
    const auto again = sa::purified_mixed_ensemble(dims, 20000, 30, {10, 0}, 2);
    CHECK(again.mean_piA == ens.mean_piA);
    CHECK(again.counts == ens.counts);
}

TEST_CASE("canonical mcmc matches the induced measure at beta = 0") {
    // exact K1 at N = M = 4 validates the Vandermonde-squared weight
    sa::McmcOptions opt;
    opt.burn_in = 20000;
    opt.thin = 32;
    const auto samples = sa::canonical_mcmc_collect(4, 0.0, 4000, {14, 0}, opt);
    REQUIRE(samples.size() == 4000);
    double sum = 0.0, sumsq = 0.0;
    for (const auto& s : samples) {
        const double p = purity(s);
        sum += p;
        sumsq += p * p;
    }
    const double mean = sum / samples.size();
    const double var = (sumsq - samples.size() * mean * mean) / (samples.size() - 1.0);
    // allow inflation of the naive se for residual autocorrelation
    const double se = std::sqrt(var / samples.size());
    CHECK(std::abs(mean - 8.0 / 17.0) < 5.0 * se);
    CHECK_THROWS_AS(sa::canonical_mcmc_collect(1, 0.0, 10, {0, 0}), DomainError);
}

TEST_CASE("mcmc stream is reproducible") {
    sa::McmcOptions opt;
    opt.burn_in = 1000;
    opt.thin = 4;
    const auto a = sa::canonical_mcmc_collect(5, 10.0, 50, {21, 3}, opt);
    const auto b = sa::canonical_mcmc_collect(5, 10.0, 50, {21, 3}, opt);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].values() == b[i].values());
}

TEST_CASE("empirical density histogram") {
    const std::vector<Spectrum> single{Spectrum({0.5, 0.5})};
    const auto h = sa::empirical_density(single, 2.0, 5);
    double mass = 0.0;
    for (std::size_t b = 0; b < h.density.size(); ++b)
        mass += h.density[b] * (h.edges[b + 1] - h.edges[b]);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

    sa::CounterRng rng({15, 0});
    std::vector<Spectrum> wis;
    for (int i = 0; i < 200; ++i) wis.push_back(sa::reduced_spectrum(BipartiteDims(16, 16), rng));
    const auto hw = sa::empirical_density(wis, 16.0, 40);
    CHECK(hw.edges.front() >= -1e-12);
    CHECK(hw.edges.back() <= 4.0 + 0.8);  // Wishart support plus finite-size slack
    CHECK_THROWS_AS(sa::empirical_density({}, 1.0, 4), DomainError);
}
