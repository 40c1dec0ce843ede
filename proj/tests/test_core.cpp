#include <doctest.h>

#include "entrostat/core.hpp"
#include "entrostat/sampling.hpp"

using namespace entrostat;

TEST_CASE("bipartite dims normalize to n <= m") {
    const BipartiteDims d(6, 2);
    CHECK(d.n() == 2);
    CHECK(d.m() == 6);
    CHECK(d.l() == 12);
    CHECK(d.swapped());
    CHECK_FALSE(BipartiteDims(2, 6).swapped());
    CHECK_THROWS_AS(BipartiteDims(0, 3), DomainError);
}

TEST_CASE("spectrum validation and ordering") {
    const Spectrum s({0.2, 0.5, 0.3});
    CHECK(s[0] == doctest::Approx(0.5));
    CHECK(s[2] == doctest::Approx(0.2));

    // tiny negatives are clamped and the vector renormalized
    const Spectrum t({1.0 + 5e-13, -5e-13});
    CHECK(t[1] == 0.0);
    CHECK(t[0] == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(Spectrum({0.5, 0.6}), DomainError);
    CHECK_THROWS_AS(Spectrum({1.1, -0.1}), DomainError);
    CHECK_THROWS_AS(Spectrum(std::vector<double>{}), DomainError);
}

TEST_CASE("purity examples") {
    CHECK(purity(Spectrum({0.25, 0.25, 0.25, 0.25})) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(purity(Spectrum({1.0, 0.0, 0.0, 0.0})) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(purity(Spectrum({0.5, 0.3, 0.2})) == doctest::Approx(0.38).epsilon(1e-14));
}

TEST_CASE("trace power examples and identities") {
    CHECK(trace_power(Spectrum({0.5, 0.5}), 3) == doctest::Approx(0.25));
    CHECK(trace_power(Spectrum({1.0, 0.0}), 4) == doctest::Approx(1.0));
    CHECK(trace_power(Spectrum({0.6, 0.4}), 3) == doctest::Approx(0.28));
    const Spectrum s({0.45, 0.35, 0.2});
    CHECK(trace_power(s, 1) == doctest::Approx(1.0));
    CHECK(trace_power(s, 2) == doctest::Approx(purity(s)));
    CHECK_THROWS_AS(trace_power(s, 0), DomainError);
}

TEST_CASE("purity bounds and trace-power monotonicity over random spectra") {
    sampling::CounterRng rng({7, 1});
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 2 + static_cast<int>(rng.uniform_index(10));
        const Spectrum s = sampling::simplex_uniform(k, rng);
        const double p = purity(s);
        CHECK(p >= 1.0 / k - 1e-12);
        CHECK(p <= 1.0 + 1e-12);
        double prev = 1.0;
        for (int q = 2; q <= 6; ++q) {
            const double t = trace_power(s, q);
            CHECK(t <= prev + 1e-14);
            prev = t;
        }
    }
    // equality cases
    CHECK(purity(Spectrum(std::vector<double>(5, 0.2))) == doctest::Approx(0.2));
    CHECK(purity(Spectrum({1.0, 0.0, 0.0, 0.0, 0.0})) == doctest::Approx(1.0));
}

TEST_CASE("thermo point satisfies the thermodynamic relation") {
    const ThermoPoint tp(1.5, 2.0, -0.3, 3, Branch::Wishart);
    CHECK(std::abs(tp.beta_f - (tp.beta * tp.u - tp.s)) < 1e-10);
    CHECK_THROWS_AS(ThermoPoint(0.0, 0.0, 0.0, 4, Branch::Wishart), DomainError);
}

TEST_CASE("branch ids reject beta outside the validity interval") {
    CHECK_NOTHROW(BranchId(Branch::Semicircle, 2.0));
    CHECK_NOTHROW(BranchId(Branch::Semicircle, 100.0));
    CHECK_THROWS_AS(BranchId(Branch::Semicircle, 1.0), DomainError);
    CHECK_NOTHROW(BranchId(Branch::Wishart, 0.5));
    CHECK_THROWS_AS(BranchId(Branch::Wishart, 3.0), DomainError);
    CHECK_NOTHROW(BranchId(Branch::MetaWishart, -0.05));
    CHECK_THROWS_AS(BranchId(Branch::MetaWishart, -0.1), DomainError);
    CHECK_NOTHROW(BranchId(Branch::Arcsine, -5.0));
    CHECK_THROWS_AS(BranchId(Branch::Arcsine, -1.0), DomainError);
    CHECK_NOTHROW(BranchId(Branch::Separable, -3.0));
    CHECK_THROWS_AS(BranchId(Branch::Separable, -2.0), DomainError);
}

TEST_CASE("support params endpoints") {
    const SupportParams p(2.0, 1.5, 0.0);
    CHECK(p.a() == doctest::Approx(0.5));
    CHECK(p.b() == doctest::Approx(3.5));
    CHECK(p.eigenvalues_positive());
    CHECK_FALSE(SupportParams(1.0, 2.0, 0.0).eigenvalues_positive());
    CHECK_THROWS_AS(SupportParams(1.0, -0.1, 0.0), DomainError);
}
