#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "omswap/gaussian.hpp"

using namespace omswap;

namespace {
DerivedQuantities reference_derived(double temperature) {
    return derive_quantities(reference_microstring_params(temperature));
}
}  // namespace

TEST_CASE("optimal plan") {
    SECTION("lossless limit tends to unit strengths and zero occupancy") {
        const auto plan = optimal_plan(1e-12, 1.0, 1.0, 0.0);
        for (double mu : plan.mu_analytic) CHECK_THAT(mu, Catch::Matchers::WithinAbs(1.0, 1e-10));
        CHECK(plan.n_min_analytic < 1e-10);
        CHECK(plan.n_min_numeric < 1e-6);
    }
    SECTION("50 mK reference point reaches 0.008") {
        const auto d = reference_derived(0.05);
        const auto plan = optimal_plan(d.epsilon, 1.0, d.eta_m, d.n_bath);
        CHECK_THAT(plan.n_min_analytic, Catch::Matchers::WithinAbs(0.008, 1e-3));
        CHECK_THAT(plan.n_min_numeric, Catch::Matchers::WithinAbs(0.008, 1e-3));
        CHECK(plan.converged);
    }
    SECTION("numerical minimizer matches the closed form") {
        for (double eps : {1e-7, 1e-5, 1e-4}) {
            for (double eta_l : {1.0, 0.8, 0.5}) {
                const double eta_m = std::exp(-M_PI * eps);
                const auto plan = optimal_plan(eps, eta_l, eta_m, 1e4);
                for (int k = 0; k < 3; ++k)
                    CHECK_THAT(plan.mu_numeric[k],
                               Catch::Matchers::WithinAbs(plan.mu_analytic[k], 1e-3));
                CHECK(plan.n_min_numeric <= plan.n_min_analytic + 1e-9);
            }
        }
    }
}

TEST_CASE("cooperativity") {
    SECTION("reference value 7.72e5") {
        const auto d = reference_derived(4.0);
        const double c = cooperativity({1, 1, 1}, d.epsilon, d.sigma, 1.0, d.eta_m);
        CHECK_THAT(c, Catch::Matchers::WithinRel(7.72e5, 0.01));
    }
    SECTION("lossless reduction 3/(8 pi eps)") {
        const double eps = 3.7e-6;
        CHECK_THAT(cooperativity({1, 1, 1}, eps, 1.0, 1.0, 1.0),
                   Catch::Matchers::WithinRel(3.0 / (8.0 * M_PI * eps), 1e-12));
    }
    SECTION("middle-pulse scaling is exactly quadratic") {
        const double eps = 1e-5;
        const double c1 = cooperativity({0.0, 1.0, 0.0}, eps, 0.97, 0.9, 0.95);
        const double c2 = cooperativity({0.0, 2.0, 0.0}, eps, 0.97, 0.9, 0.95);
        CHECK_THAT(c2 / c1, Catch::Matchers::WithinRel(4.0, 1e-12));
    }
    SECTION("undamped cooperativity is undefined") {
        CHECK_THROWS_AS(cooperativity({1, 1, 1}, 0.0, 1.0, 1.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("cooling criteria") {
    SECTION("reference 4 K point satisfies the thermal bound") {
        const auto d = reference_derived(4.0);
        const double c = cooperativity({1, 1, 1}, d.epsilon, d.sigma, 1.0, d.eta_m);
        const auto crit = cooling_criteria(d.epsilon, 1.0, d.n_bath, c);
        CHECK_THAT(crit.thermal_bound, Catch::Matchers::WithinRel(1.372e6, 1e-3));
        CHECK(crit.thermal_occupancy_ok);
        CHECK(crit.cooperativity_ok);
        CHECK(crit.optical_efficiency_ok);
    }
    SECTION("low optical efficiency fails the eta_l > 1/5 requirement") {
        const auto crit = cooling_criteria(1e-6, 0.1, 1.0, 1e6);
        CHECK_FALSE(crit.optical_efficiency_ok);
    }
    SECTION("unit efficiency bound is (4/3)^2 C") {
        const double c = 3.14e5;
        const auto crit = cooling_criteria(1e-6, 1.0, 1.0, c);
        CHECK_THAT(crit.cooperativity_bound,
                   Catch::Matchers::WithinRel((16.0 / 9.0) * c, 1e-12));
    }
}

TEST_CASE("tolerance width") {
    SECTION("Q_M = 1e6 photon-number tolerance is about 0.61%") {
        const double g = 1e-6;  // Gamma/omega at Q_M = 1e6
        const double sigma = std::sqrt(1.0 - 0.25 * g * g);
        const auto w = tolerance_width(0.5 * g / sigma, 1.0, 5e3);
        CHECK_THAT(w.dn_over_n, Catch::Matchers::WithinAbs(0.0061, 5e-4));
    }
    SECTION("numeric width tracks sqrt(6 pi eps) in the thermal-dominated regime") {
        for (double eps : {1e-8, 1e-6, 1e-4}) {
            for (double nb : {1e3, 1e6}) {
                const auto w = tolerance_width(eps, 1.0, nb);
                CHECK(w.width_numeric / w.width_analytic > 0.8);
                CHECK(w.width_numeric / w.width_analytic < 1.2);
            }
        }
        // with optical loss the closed form remains valid only while thermal
        // noise dominates the dip minimum
        for (double eta_l : {0.5, 0.75}) {
            const double eps = 1e-4;
            const auto w = tolerance_width(eps, eta_l, 1e6);
            CHECK(w.width_numeric / w.width_analytic > 0.8);
            CHECK(w.width_numeric / w.width_analytic < 1.2);
        }
    }
    SECTION("analytic width is monotone in eps") {
        double prev = 0.0;
        for (double eps : {1e-8, 1e-7, 1e-6, 1e-5, 1e-4}) {
            const auto w = tolerance_width(eps, 1.0, 1e4);
            CHECK(w.width_analytic > prev);
            prev = w.width_analytic;
        }
    }
    SECTION("eps = 0 is rejected") {
        CHECK_THROWS_AS(tolerance_width(0.0, 1.0, 1e4), std::invalid_argument);
    }
}

TEST_CASE("cooling surface") {
    CoolingSurfaceSpec spec;
    spec.n_gamma = 12;
    spec.n_bath_pts = 12;
    const auto cells = cooling_surface(spec);
    REQUIRE(cells.size() == 144);

    SECTION("cells satisfying the thermal bound with 10x margin are ground-state cooled") {
        int checked = 0;
        for (const auto& c : cells) {
            if (c.n_bath * 10.0 < c.eq15_bound) {
                CHECK(c.n_final < 1.0);
                ++checked;
            }
        }
        CHECK(checked > 0);
    }
    SECTION("occupancy is monotone in the bath at fixed damping") {
        for (int ig = 0; ig < spec.n_gamma; ++ig) {
            for (int ib = 1; ib < spec.n_bath_pts; ++ib) {
                const auto& lo = cells[ig * spec.n_bath_pts + ib - 1];
                const auto& hi = cells[ig * spec.n_bath_pts + ib];
                CHECK(hi.n_final >= lo.n_final - 1e-12);
            }
        }
    }
    SECTION("weak-damping column tends to the optical-loss floor") {
        CoolingSurfaceSpec lossy = spec;
        lossy.eta_l = 0.8;
        lossy.gamma_over_omega_lo = lossy.gamma_over_omega_hi = 1e-12;
        lossy.n_gamma = 1;
        lossy.n_bath_lo = lossy.n_bath_hi = 1.0;
        lossy.n_bath_pts = 1;
        const auto floor_cells = cooling_surface(lossy);
        CHECK_THAT(floor_cells[0].n_final,
                   Catch::Matchers::WithinAbs(0.25 * (1.0 / 0.8 - 1.0), 1e-6));
    }
}

TEST_CASE("cooling report") {
    const auto d = reference_derived(4.0);
    const auto plan = chi_for_mu({1, 1, 1}, 1.0, d.eta_m, d.sigma);
    const auto rep = cooling_report(plan, d, 1.0, d.n_bath);
    CHECK_THAT(rep.n_final, Catch::Matchers::WithinAbs(0.606, 5e-3));
    CHECK_THAT(rep.n_min_analytic, Catch::Matchers::WithinAbs(0.606, 5e-3));
    CHECK(rep.criteria.thermal_occupancy_ok);
    CHECK_THAT(rep.cooperativity_value, Catch::Matchers::WithinRel(7.72e5, 0.01));
    CHECK_THAT(rep.mu_optimal[1], Catch::Matchers::WithinAbs(1.0, 1e-5));
}
