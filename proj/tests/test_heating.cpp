#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "omswap/heating.hpp"
#include "omswap/params.hpp"

using namespace omswap;

TEST_CASE("absorption heating for the SiN microstring") {
    const auto p = sin_microstring_preset();
    const auto r = absorption_heating(p);

    SECTION("occupancy shift per finesse-photon is of order 1e-9") {
        const double per_fn = r.delta_n_bath / (p.finesse * p.n_photons);
        CHECK(per_fn > 1e-10);
        CHECK(per_fn < 1e-8);
    }
    SECTION("relative bath shift at 50 mK is a modest fraction") {
        const double n_bath = bath_occupancy(p.omega_m, 0.05);
        const double frac = r.delta_n_bath / n_bath;
        CHECK(frac > 0.02);
        CHECK(frac < 0.50);
    }
    SECTION("thermal rate uses the centre-to-edge distance") {
        CHECK_THAT(r.thermal_rate, Catch::Matchers::WithinAbs(265.0, 5.0));
        CHECK(p.omega_m / r.thermal_rate > 1e3);  // heat diffusion is slow
    }
    SECTION("diffusion length and volume are micron scale") {
        CHECK_THAT(r.diffusion_length, Catch::Matchers::WithinRel(2.57e-5, 0.01));
        CHECK_THAT(r.heated_volume, Catch::Matchers::WithinRel(p.thickness * p.width * r.diffusion_length, 1e-12));
    }
}

TEST_CASE("no light, no heating") {
    auto p = sin_microstring_preset();
    p.n_photons = 0.0;
    const auto r = absorption_heating(p);
    CHECK(r.absorbed_energy == 0.0);
    CHECK(r.delta_t == 0.0);
    CHECK(r.delta_n_bath == 0.0);
    CHECK(r.thermal_rate > 0.0);
    CHECK(r.diffusion_length > 0.0);
}

TEST_CASE("occupancy shift is exactly linear in N and finesse") {
    auto p = sin_microstring_preset();
    const double base = absorption_heating(p).delta_n_bath;
    p.n_photons *= 2.0;
    CHECK_THAT(absorption_heating(p).delta_n_bath, Catch::Matchers::WithinRel(2.0 * base, 1e-12));
    p = sin_microstring_preset();
    p.finesse *= 3.0;
    CHECK_THAT(absorption_heating(p).delta_n_bath, Catch::Matchers::WithinRel(3.0 * base, 1e-12));
}

TEST_CASE("heating validation") {
    auto p = sin_microstring_preset();
    p.thickness = 0.0;
    CHECK_THROWS_AS(absorption_heating(p), std::invalid_argument);
    p = sin_microstring_preset();
    p.n_photons = -1.0;
    CHECK_THROWS_AS(absorption_heating(p), std::invalid_argument);
}

TEST_CASE("shipped material table matches the built-in preset") {
    std::ifstream in(std::string(OMSWAP_SOURCE_DIR) + "/data/materials.json");
    REQUIRE(in);
    const auto j = nlohmann::json::parse(in);
    const auto& sin = j.at("si3n4");
    const auto p = sin_microstring_preset();
    CHECK(sin.at("density_kg_m3").get<double>() == p.density);
    CHECK(sin.at("specific_heat_j_kg_k").get<double>() == p.specific_heat);
    CHECK(sin.at("conductivity_w_m_k").get<double>() == p.conductivity);
}
