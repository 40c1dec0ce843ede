#include <doctest.h>

#include <cmath>

#include "entrostat/analytic.hpp"
#include "entrostat/numeric.hpp"

using namespace entrostat;
namespace an = entrostat::analytic;

namespace {

// Independent principal-value oracle for the Tricomi equation: with
// y = cos(theta) the endpoint weight disappears and the PV reduces to a
// smooth integral by the Glauert identity PV int_0^pi dtheta/(cos t - x) = 0.
double pv_hilbert(const SupportParams& p, double x) {
    auto numerator = [&](double y) {
        const double bd2 = p.beta * p.delta * p.delta;
        return 1.0 + bd2 / 2.0 + 2.0 * (1.0 - p.m_center) * y / p.delta - bd2 * y * y;
    };
    const double px = numerator(x);
    return adaptive_simpson(
               [&](double th) {
                   const double y = std::cos(th);
                   if (std::abs(y - x) < 1e-13) {
                       // removable point: limit is p'(x)
                       const double bd2 = p.beta * p.delta * p.delta;
                       return 2.0 * (1.0 - p.m_center) / p.delta - 2.0 * bd2 * x;
                   }
                   return (numerator(y) - px) / (y - x);
               },
               0.0, kPi, 1e-12) /
           kPi;
}

// pi * g(x): the equation reads (1/pi) PV int phi/(y-x) = g(x)
double tricomi_rhs(const SupportParams& p, double x) {
    const double ixi = -an::lagrange_xi(p);  // i*xi for purely imaginary xi
    return -(ixi * p.delta / 2.0 + p.beta * p.delta * p.m_center +
             p.beta * p.delta * p.delta * x);
}

}  // namespace

TEST_CASE("tricomi density closed-form values") {
    CHECK(an::tricomi_density(SupportParams(1.0, 1.0, 2.0), 0.0) ==
          doctest::Approx(2.0 / kPi).epsilon(1e-12));
    CHECK(an::tricomi_density(SupportParams(2.0, 2.0, 0.0), 0.0) ==
          doctest::Approx(1.0 / kPi).epsilon(1e-12));
    CHECK(an::tricomi_density(SupportParams(1.0, 1.0, -2.0), 0.0) ==
          doctest::Approx(0.0));
}

TEST_CASE("tricomi density edges") {
    // semicircle numerator vanishes at the edges: finite limit 0
    CHECK(an::tricomi_density(SupportParams(1.0, 1.0, 2.0), 1.0) == 0.0);
    // Wishart numerator 1-x vanishes at x=+1; the x=-1 edge diverges
    CHECK(an::tricomi_density(SupportParams(2.0, 2.0, 0.0), 1.0) == 0.0);
    CHECK(std::isinf(an::tricomi_density(SupportParams(2.0, 2.0, 0.0), -1.0)));
    CHECK_THROWS_AS(an::tricomi_density(SupportParams(2.0, 2.0, 0.0), 1.5), DomainError);
    // off-domain parameters rejected
    CHECK_THROWS_AS(an::tricomi_density(SupportParams(5.0, 0.5, 0.0), 0.0), DomainError);
}

TEST_CASE("lagrange multiplier plug-ins") {
    CHECK(an::lagrange_xi(SupportParams(1.0, 1.0, 2.0)) == doctest::Approx(4.0));
    CHECK(an::lagrange_xi(SupportParams(2.0, 2.0, 0.0)) == doctest::Approx(-1.0));
    CHECK(an::lagrange_xi(SupportParams(1.0, 2.0, 0.0)) == doctest::Approx(0.0));
    CHECK_THROWS_AS(an::lagrange_xi(SupportParams(1.0, 0.0, 1.0)), DomainError);
}

TEST_CASE("lagrange multiplier against the principal-value oracle") {
    // the multiplier is what makes phi solve the singular integral equation
    for (const SupportParams p :
         {SupportParams(2.0, 2.0, 0.0), SupportParams(1.0, 1.0, 2.0),
          SupportParams(1.2, 1.1, 0.7)}) {
        for (double x : {-0.62, 0.1, 0.55}) {
            CHECK(pv_hilbert(p, x) == doctest::Approx(tricomi_rhs(p, x)).epsilon(1e-9));
        }
    }
}

TEST_CASE("feasible domain corners and boundaries") {
    const auto d2 = an::feasible_domain(2.0);
    REQUIRE(d2.corner.has_value());
    CHECK(d2.corner->first == doctest::Approx(1.0));
    CHECK(d2.corner->second == doctest::Approx(1.0));

    const auto dm2 = an::feasible_domain(-2.0);
    REQUIRE(dm2.corner.has_value());
    CHECK(dm2.corner->first == doctest::Approx(1.0));
    CHECK(dm2.corner->second == doctest::Approx(1.0));

    const auto d0 = an::feasible_domain(0.0);
    CHECK(d0.upper(2.0) == doctest::Approx(2.0));
    CHECK(d0.delta_max == doctest::Approx(2.0));
    CHECK_FALSE(d0.corner.has_value());

    // corner appears exactly at |beta| = 2 and carries delta = sqrt(2/|beta|)
    CHECK_FALSE(an::feasible_domain(1.9).corner.has_value());
    CHECK_FALSE(an::feasible_domain(-1.9).corner.has_value());
    const auto d5 = an::feasible_domain(5.0);
    REQUIRE(d5.corner.has_value());
    CHECK(d5.corner->first == doctest::Approx(std::sqrt(0.4)));

    // lower <= upper across the domain for several temperatures
    for (double beta : {-5.0, -1.0, -0.05, 0.0, 0.7, 3.0}) {
        const auto dom = an::feasible_domain(beta);
        for (int i = 1; i < 40; ++i) {
            const double d = dom.delta_max * i / 40.0;
            CHECK(dom.lower(d) <= dom.upper(d) + 1e-12);
        }
    }
}

TEST_CASE("stable branch parameters") {
    {
        auto [p, id, ev] = an::stable_branch(2.0);
        CHECK(p.m_center == doctest::Approx(1.0));
        CHECK(p.delta == doctest::Approx(1.0));
        CHECK(id.tag == Branch::Semicircle);
        CHECK(ev.mu == 0.0);
    }
    {
        auto [p, id, ev] = an::stable_branch(0.0);
        CHECK(p.m_center == doctest::Approx(2.0));
        CHECK(p.delta == doctest::Approx(2.0));
        CHECK(id.tag == Branch::Wishart);
    }
    {
        auto [p, id, ev] = an::stable_branch(-10.0);
        CHECK(id.tag == Branch::Separable);
        CHECK(ev.mu == doctest::Approx(0.5 + 0.5 * std::sqrt(0.8)).epsilon(1e-12));
        CHECK(ev.sea_scale == doctest::Approx(1.0 - ev.mu));
    }
    {
        auto [p, id, ev] = an::stable_branch(-1.0);  // typical phase
        CHECK(id.tag == Branch::Wishart);
        CHECK(ev.mu == 0.0);
    }
}

TEST_CASE("metastable branch parameters") {
    {
        auto [p, id] = an::metastable_branch(-2.0 / 27.0);
        CHECK(p.delta == doctest::Approx(3.0));
        CHECK(id.tag == Branch::MetaWishart);
    }
    {
        auto [p, id] = an::metastable_branch(-1.5 + std::sqrt(2.0));
        CHECK(p.delta == doctest::Approx(2.0 + std::sqrt(2.0)));
        CHECK(id.tag == Branch::AsymArcsineUpper);
    }
    {
        auto [p, id] = an::metastable_branch(-2.0);
        CHECK(p.delta == doctest::Approx(1.0));
        CHECK(p.m_center == doctest::Approx(1.0));
        CHECK(id.tag == Branch::Arcsine);
    }
    {
        auto [p, id] = an::metastable_branch(-1.0);
        CHECK(id.tag == Branch::AsymArcsineLower);
    }
    CHECK_THROWS_AS(an::metastable_branch(0.5), DomainError);
}

TEST_CASE("thermodynamics on the alpha=3 branches") {
    const auto a = an::thermo(SupportParams(1.0, 1.0, 2.0), Branch::Semicircle);
    CHECK(a.u == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(a.s == doctest::Approx(-0.25 - std::log(2.0)).epsilon(1e-14));
    CHECK(a.alpha == 3);

    CHECK(an::thermo(SupportParams(2.0, 2.0, 0.0), Branch::Wishart).u ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(an::thermo(SupportParams(3.0, 3.0, -2.0 / 27.0), Branch::MetaWishart).u ==
          doctest::Approx(2.25).epsilon(1e-14));
    // u = 7/4 where the metastable branch restores the Z2 symmetry
    CHECK(an::thermo_metastable(-2.0).u == doctest::Approx(1.75).epsilon(1e-12));
    CHECK_THROWS_AS(an::thermo(SupportParams(9.0, 0.1, 0.0), Branch::Wishart), DomainError);
}

TEST_CASE("thermo classifies branch parameters") {
    CHECK(an::thermo(SupportParams(1.0, 1.0, 2.0)).branch == Branch::Semicircle);
    CHECK(an::thermo(SupportParams(2.0, 2.0, 0.0)).branch == Branch::Wishart);
    CHECK(an::thermo(SupportParams(1.0, 1.0, -2.0)).branch == Branch::Arcsine);
    const double bg = -2.0 / 27.0;
    CHECK(an::thermo(SupportParams(3.0, 3.0, bg)).branch == Branch::MetaWishart);
}

TEST_CASE("negative-temperature stable branch") {
    const auto t = an::thermo_negative_stable(-1.0);
    CHECK(t.u == 0.0);
    CHECK(t.s == doctest::Approx(-0.5));
    CHECK(t.beta_f == doctest::Approx(0.5));
    CHECK(t.alpha == 2);

    const auto bm = an::solve_beta_minus();
    CHECK(an::thermo_negative_stable(bm.beta_minus - 1e-12).u ==
          doctest::Approx(bm.mu_minus * bm.mu_minus).epsilon(1e-6));
    CHECK(an::thermo_negative_stable(-1e9).u == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(an::thermo_negative_stable(0.5), DomainError);
}

TEST_CASE("beta minus root") {
    const auto bm = an::solve_beta_minus();
    CHECK(bm.mu_minus == doctest::Approx(0.71533).epsilon(2e-5));
    CHECK(bm.beta_minus == doctest::Approx(-2.45541).epsilon(2e-5));
    CHECK(an::evaporated_mu(bm.beta_minus) == doctest::Approx(bm.mu_minus).epsilon(1e-6));
}

TEST_CASE("entropy as a function of internal energy") {
    CHECK(an::entropy_vs_u(1.25, an::BranchFamily::PositiveStable) ==
          doctest::Approx(-0.5 * (0.5 + std::log(4.0))).epsilon(1e-12));
    CHECK(an::entropy_vs_u(2.25, an::BranchFamily::Metastable) ==
          doctest::Approx(-11.0 / 12.0 + std::log(1.5)).epsilon(1e-12));
    const auto bm = an::solve_beta_minus();
    const double mu2 = bm.mu_minus * bm.mu_minus;
    CHECK(an::entropy_vs_u(mu2, an::BranchFamily::NegativeStable) ==
          doctest::Approx(std::log1p(-bm.mu_minus) - 0.5).epsilon(1e-10));
    CHECK(an::entropy_vs_u(mu2, an::BranchFamily::NegativeStable) ==
          doctest::Approx(-1.75643).epsilon(1e-5));

    // parametric consistency on the asymmetric-arcsine window
    for (double delta : {1.05, 1.1, 1.15}) {
        const double beta = an::asym_beta_of_delta(delta, -1);
        const auto tp = an::thermo(SupportParams(delta, delta, beta),
                                   Branch::AsymArcsineLower);
        CHECK(an::entropy_vs_u(tp.u, an::BranchFamily::Metastable) ==
              doctest::Approx(tp.s).epsilon(1e-9));
    }

    CHECK_THROWS_AS(an::entropy_vs_u(0.9, an::BranchFamily::PositiveStable), DomainError);
    CHECK_THROWS_AS(an::entropy_vs_u(2.5, an::BranchFamily::Metastable), DomainError);
    CHECK_THROWS_AS(an::entropy_vs_u(1.2, an::BranchFamily::NegativeStable), DomainError);
}

TEST_CASE("entropy and volume versus purity") {
    const int n = 20;
    const auto bm = an::solve_beta_minus();
    CHECK(an::entropy_vs_purity(2.0 / n, n) ==
          doctest::Approx(2.0 * bm.beta_minus / n - 0.5).epsilon(1e-10));
    CHECK(an::entropy_vs_purity(bm.mu_minus * bm.mu_minus, n) ==
          doctest::Approx(-1.75643).epsilon(1e-5));
    // log divergence toward the maximally entangled endpoint
    CHECK(an::entropy_vs_purity(1.0 / n + 1e-11, n) < -10.0);
    CHECK(an::isopurity_log_volume(0.5, n) ==
          doctest::Approx(n * n * an::entropy_vs_purity(0.5, n)));
    CHECK_THROWS_AS(an::entropy_vs_purity(1.0 / n, n), DomainError);
    CHECK_THROWS_AS(an::entropy_vs_purity(1.0, n), DomainError);
}

TEST_CASE("extreme eigenvalues versus purity") {
    const int n = 24;
    auto [lmin0, lmax0] = an::lambda_extremes(1.25 / n, n);
    CHECK(lmin0 == doctest::Approx(0.0));
    CHECK(lmax0 == doctest::Approx(2.0 / n));
    // near-maximally-mixed limit
    auto [lmin1, lmax1] = an::lambda_extremes(1.0 / n + 1e-12, n);
    CHECK(lmin1 == doctest::Approx(1.0 / n).epsilon(1e-4));
    CHECK(lmax1 == doctest::Approx(1.0 / n).epsilon(1e-4));
    // separable branch
    auto [lmin2, lmax2] = an::lambda_extremes(0.25, 1000);
    CHECK(lmax2 == doctest::Approx(0.5));
    // continuity at the first breakpoint; the evaporation jump at 2/n
    auto [a1, b1] = an::lambda_extremes(1.25 / n - 1e-12, n);
    auto [a2, b2] = an::lambda_extremes(1.25 / n + 1e-12, n);
    CHECK(b1 == doctest::Approx(b2).epsilon(1e-5));
    auto [a3, b3] = an::lambda_extremes(2.0 / n + 1e-12, n);
    CHECK(b3 == doctest::Approx(std::sqrt(2.0 / n)).epsilon(1e-6));
}

TEST_CASE("lambda-space densities") {
    auto [ps, ids, evs] = an::stable_branch(2.0);
    CHECK(an::density_of_eigenvalues(Branch::Semicircle, ps, 1.0) ==
          doctest::Approx(2.0 / kPi).epsilon(1e-12));
    auto [pw, idw, evw] = an::stable_branch(0.0);
    CHECK(an::density_of_eigenvalues(Branch::Wishart, pw, 2.0) ==
          doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-12));
    auto [pa, ida] = an::metastable_branch(-2.0);
    CHECK(an::density_of_eigenvalues(Branch::Arcsine, pa, 1.0) == doctest::Approx(0.0));
    CHECK(std::isinf(an::density_of_eigenvalues(Branch::Arcsine, pa, pa.b())));
    CHECK_THROWS_AS(an::density_of_eigenvalues(Branch::Semicircle, ps, 5.0), DomainError);

    // normalization of the lambda-space density by quadrature (theta substitution)
    for (double beta : {-4.0, -1.0, 3.0}) {
        const auto pr = beta < 0.0
                            ? an::metastable_branch(beta).first
                            : std::get<0>(an::stable_branch(beta));
        const Branch tag = beta < 0.0 ? an::metastable_branch(beta).second.tag
                                      : std::get<1>(an::stable_branch(beta)).tag;
        const double norm = adaptive_simpson(
            [&](double th) {
                const double x = std::cos(th);
                const double lam = pr.m_center + pr.delta * x;
                const double rho = an::density_of_eigenvalues(tag, pr, lam);
                return rho * pr.delta * std::sin(th);
            },
            1e-6, kPi - 1e-6, 1e-11);
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("asymmetric arcsine densities diverge at both edges") {
    for (double beta : {-0.08, -0.5, -1.5}) {
        auto [p, id] = an::metastable_branch(beta);
        CHECK(std::isinf(an::tricomi_density(p, 1.0)));
        CHECK(std::isinf(an::tricomi_density(p, -1.0)));
        CHECK(std::isinf(an::density_of_eigenvalues(id.tag, p, p.a())));
        CHECK(std::isinf(an::density_of_eigenvalues(id.tag, p, p.b())));
    }
}

TEST_CASE("sea density for mixed states") {
    // x = 0 reduces to the beta = 0 Wishart law
    auto [pw, idw, evw] = an::stable_branch(0.0);
    for (double lam : {0.4, 1.3, 3.2}) {
        CHECK(an::sea_density_mixed(0.0, lam) ==
              doctest::Approx(an::density_of_eigenvalues(Branch::Wishart, pw, lam))
                  .epsilon(1e-12));
    }
    // support shrinks as x -> 1
    CHECK_THROWS_AS(an::sea_density_mixed(0.999999, 0.1), DomainError);
    // mean and normalization at x = 1/4 by quadrature (u^2 substitution)
    const double x = 0.25;
    const double top = 4.0 * (1.0 - std::sqrt(x));
    const double mean = adaptive_simpson(
        [&](double u) {
            const double lam = u * u;
            return lam * an::sea_density_mixed(x, lam) * 2.0 * u;
        },
        1e-10, std::sqrt(top) - 1e-9, 1e-11);
    CHECK(mean == doctest::Approx(1.0 - std::sqrt(x)).epsilon(1e-8));
    const double norm = adaptive_simpson(
        [&](double u) { return an::sea_density_mixed(x, u * u) * 2.0 * u; }, 1e-10,
        std::sqrt(top) - 1e-9, 1e-11);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("critical point catalog") {
    const auto pts = an::critical_points();
    REQUIRE(pts.size() == 4);
    bool has_plus = false, has_minus = false, has_g = false, has_m2 = false;
    for (const auto& c : pts) {
        if (std::abs(c.beta_c - 2.0) < 1e-12) {
            has_plus = c.order == 2 && c.signature.find("1/8") != std::string::npos;
        } else if (std::abs(c.beta_c + 2.0) < 1e-12) {
            has_m2 = c.order == 2 && c.signature.find("5/32") != std::string::npos;
        } else if (std::abs(c.beta_c + 2.0 / 27.0) < 1e-12) {
            has_g = c.order == 2 && c.signature.find("diverge") != std::string::npos;
        } else {
            has_minus = c.order == 1 && std::abs(c.beta_c + 2.45541) < 1e-4;
        }
    }
    CHECK(has_plus);
    CHECK(has_minus);
    CHECK(has_g);
    CHECK(has_m2);
}

TEST_CASE("second-order transition at beta_+ by finite differences") {
    auto s = [](double beta) { return an::thermo_stable(beta).s; };
    const double h = 1e-3;
    const double above = (s(2.0 + h) - 2.0 * s(2.0 + 2.0 * h) + s(2.0 + 3.0 * h)) / (h * h);
    const double below = (s(2.0 - 3.0 * h) - 2.0 * s(2.0 - 2.0 * h) + s(2.0 - h)) / (h * h);
    CHECK(above - below == doctest::Approx(0.125).epsilon(0.08));
    // continuity of u and s across the transition
    CHECK(an::thermo_stable(2.0 + 1e-12).u == doctest::Approx(an::thermo_stable(2.0 - 1e-12).u));
    CHECK(an::thermo_stable(2.0 + 1e-12).s == doctest::Approx(an::thermo_stable(2.0 - 1e-12).s));
}

TEST_CASE("gravity-point expansion of the free energy") {
    const double bg = -2.0 / 27.0;
    CHECK(an::thermo_metastable(bg).beta_f ==
          doctest::Approx(0.75 - std::log(1.5)).epsilon(1e-12));
    const double slope =
        (an::thermo_metastable(bg + 1e-4).beta_f - an::thermo_metastable(bg).beta_f) / 1e-4;
    CHECK(slope == doctest::Approx(2.25).epsilon(0.01));
}
