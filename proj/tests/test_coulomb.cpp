#include <doctest.h>

#include <cmath>

#include "entrostat/analytic.hpp"
#include "entrostat/coulomb.hpp"
#include "entrostat/sampling.hpp"

using namespace entrostat;
namespace co = entrostat::coulomb;

namespace {
// interior points with a minimum pairwise gap keep the finite-difference
// third-derivative error below the 1e-5 gate at h = 1e-7
std::vector<double> well_separated_point(int n, sampling::CounterRng& rng) {
    for (;;) {
        auto lam = sampling::simplex_uniform(n, rng).values();
        double min_gap = 1e9;
        for (std::size_t i = 0; i + 1 < lam.size(); ++i)
            min_gap = std::min(min_gap, lam[i] - lam[i + 1]);
        if (min_gap > 1e-3) return lam;
    }
}
}  // namespace


TEST_CASE("finite free energy hand value") {
    // beta (0.625) - (2/4) ln(1/2) - ln 2
    const double v = co::finite_free_energy(Spectrum({0.75, 0.25}), -2.0, 2);
    CHECK(v == doctest::Approx(-1.25 + 0.5 * std::log(2.0) - std::log(2.0)).epsilon(1e-12));
    CHECK(v == doctest::Approx(-1.59657).epsilon(1e-5));

    CHECK_THROWS_AS(co::finite_free_energy(Spectrum({0.5, 0.5}), 0.0, 2), DegenerateError);
    CHECK_THROWS_AS(co::finite_free_energy(Spectrum({1.0, 0.0}), 0.0, 2), DegenerateError);
    CHECK_THROWS_AS(co::finite_free_energy(Spectrum({0.75, 0.25}), 0.0, 3), DomainError);
}

TEST_CASE("free energy permutation invariance") {
    sampling::CounterRng rng({31, 0});
    const Spectrum s = sampling::simplex_uniform(9, rng);
    std::vector<double> rot = s.values();
    std::rotate(rot.begin(), rot.begin() + 4, rot.end());
    CHECK(co::finite_free_energy(Spectrum(rot), -1.7, 9) ==
          doctest::Approx(co::finite_free_energy(s, -1.7, 9)).epsilon(1e-13));
}

TEST_CASE("gradient matches finite differences") {
    sampling::CounterRng rng({32, 0});
    for (int n : {4, 8, 16}) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto lam = well_separated_point(n, rng);
            const auto g = co::finite_free_energy_gradient(lam, -1.3, n);
            const double h = 1e-7;
            auto raw = [&](const std::vector<double>& v) {
                double quad = 0.0, logsum = 0.0;
                for (double x : v) quad += x * x;
                for (int a = 0; a < n; ++a)
                    for (int b = a + 1; b < n; ++b)
                        logsum += std::log(std::abs(v[a] - v[b]));
                return -1.3 * quad - 2.0 / (static_cast<double>(n) * n) * logsum;
            };
            for (int i = 0; i < n; ++i) {
                auto lp = lam, lm = lam;
                lp[i] += h;
                lm[i] -= h;
                const double fd = (raw(lp) - raw(lm)) / (2.0 * h);
                CHECK(std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])) < 1e-5);
            }
        }
    }
}

TEST_CASE("minimizer produces valid converged spectra") {
    const auto res = co::minimize_free_energy(16, -1.0, co::wishart_seed(16));
    CHECK(res.converged);
    CHECK(res.grad_norm < 1e-9);
    const auto& v = res.spectrum.values();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) CHECK(v[i] - v[i + 1] > 1e-12);
    CHECK(res.spectrum.smallest() >= 0.0);
    // descent from the seed
    CHECK(res.beta_f <= co::finite_free_energy(co::wishart_seed(16), -1.0, 16) + 1e-12);
    CHECK_THROWS_AS(co::minimize_free_energy(1, 0.0, Spectrum({1.0}), {}), DomainError);
}

TEST_CASE("separable basin tracks the evaporated eigenvalue") {
    const auto bp = co::minimize_both_basins(30, -2.5);
    CHECK(bp.separable.converged);
    CHECK(bp.separable.spectrum.largest() ==
          doctest::Approx(analytic::evaporated_mu(-2.5)).epsilon(0.07));
    // below the swap the separable basin is the stable one
    CHECK(bp.separable.beta_f < bp.typical.beta_f);
}

TEST_CASE("two-basin competition at n = 30") {
    // birth of the second minimum around beta = -1.8
    std::vector<double> grid;
    for (double mu = 0.2; mu <= 0.85 + 1e-12; mu += 0.05) grid.push_back(mu);
    const auto prof = co::profile_fixed_max(30, -1.8, grid);
    int minima = 0;
    double mu_at_min = 0.0;
    for (std::size_t i = 1; i + 1 < prof.size(); ++i)
        if (prof[i].second < prof[i - 1].second && prof[i].second < prof[i + 1].second) {
            ++minima;
            mu_at_min = prof[i].first;
        }
    CHECK(minima >= 1);
    CHECK(mu_at_min == doctest::Approx(0.5).epsilon(0.25));

    // near-equal free energies close to the finite-size swap
    const auto bp = co::minimize_both_basins(30, -1.935);
    CHECK(std::abs(bp.typical.beta_f - bp.separable.beta_f) < 1e-3);
}

TEST_CASE("finite-size drift of the typical free energy at beta = 0") {
    // the analytic value is 1/2; the discrete minimum approaches it like
    // ~2.3 ln(n)/n, which is 0.26 at n = 30
    const double b30 = co::minimize_both_basins(30, 0.0).typical.beta_f;
    const double b60 = co::minimize_both_basins(60, 0.0).typical.beta_f;
    const double b120 = co::minimize_both_basins(120, 0.0).typical.beta_f;
    CHECK(std::abs(b30 - 0.5) < 0.30);
    CHECK(std::abs(b60 - 0.5) < std::abs(b30 - 0.5));
    CHECK(std::abs(b120 - 0.5) < std::abs(b60 - 0.5));
}

TEST_CASE("crossing location and bracketing errors") {
    const double cross = co::locate_crossing(30, -2.5, -1.8, 1e-3);
    CHECK(cross == doctest::Approx(-1.935).epsilon(0.026));
    // no separable basin at beta = -1.2: bracketing must fail loudly
    CHECK_THROWS_AS(co::locate_crossing(30, -1.5, -1.2, 1e-3), BracketError);
}

TEST_CASE("crossing decreases toward beta_minus with n") {
    // brackets stay inside each system's two-basin window
    const double c20 = co::locate_crossing(20, -1.9, -1.7, 1e-3);
    const double c30 = co::locate_crossing(30, -2.2, -1.8, 1e-3);
    const double c40 = co::locate_crossing(40, -2.4, -1.9, 1e-3);
    const double c60 = co::locate_crossing(60, -2.5, -1.9, 1e-3);
    CHECK(c30 < c20);
    CHECK(c40 < c30);
    CHECK(c60 < c40);
    CHECK(c60 > analytic::solve_beta_minus().beta_minus);
}

TEST_CASE("maximum-eigenvalue curve spot checks at n = 40") {
    const auto rows = co::max_eigenvalue_curve(40, {-4.0, -1.0});
    REQUIRE(rows.size() == 2);
    // evaporated branch at beta = -4
    CHECK(rows[0].lambda_max_separable ==
          doctest::Approx(analytic::evaporated_mu(-4.0)).epsilon(0.04));
    // typical branch at beta = -1: (2/n) delta(beta/n)
    const double ref = 2.0 / 40.0 * analytic::wishart_delta_meta(-1.0 / 40.0);
    CHECK(rows[1].lambda_max_typical == doctest::Approx(ref).epsilon(0.25));
    CHECK(std::abs(rows[1].lambda_max_typical - ref) < 0.03);
}
