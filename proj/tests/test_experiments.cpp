#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "omswap/experiments.hpp"

using namespace omswap;
using namespace omswap::experiments;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "omswap_exp_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentSpec base_spec(const std::string& name, const std::filesystem::path& out) {
    ExperimentSpec spec;
    spec.name = name;
    spec.output_dir = out.string();
    spec.threads = 2;
    return spec;
}

}  // namespace

TEST_CASE("table1 experiment") {
    const auto out = fresh_dir("table1");
    auto spec = base_spec("table1", out);
    spec.grid = {6.0, 128};
    const auto result = run(spec);
    REQUIRE(result.exit_code == 0);
    const auto j = nlohmann::json::parse(slurp(out / "table1.json"));
    REQUIRE(j.at("rows").size() == 2);

    const auto& warm = j.at("rows")[0];
    CHECK_THAT(warm.at("n_bath").get<double>(), Catch::Matchers::WithinRel(8.32e5, 5e-3));
    CHECK_THAT(warm.at("n_final_pipeline").get<double>(), Catch::Matchers::WithinAbs(0.606, 5e-3));
    CHECK_THAT(warm.at("cooperativity").get<double>(), Catch::Matchers::WithinRel(7.72e5, 0.01));

    const auto& cold = j.at("rows")[1];
    CHECK_THAT(cold.at("n_bath").get<double>(), Catch::Matchers::WithinRel(1.04e4, 5e-3));
    CHECK_THAT(cold.at("n_min_optimal_analytic").get<double>(),
               Catch::Matchers::WithinAbs(0.008, 1e-3));
    CHECK_THAT(cold.at("fock1_transfer_infidelity").get<double>(),
               Catch::Matchers::WithinAbs(0.023, 5e-3));
    CHECK(j.at("metadata").at("convention").get<std::string>() == kConventionNote);
}

TEST_CASE("cool-surface experiment") {
    const auto out = fresh_dir("surface");
    auto spec = base_spec("cool-surface", out);
    spec.extra = nlohmann::json{{"n_gamma", 8}, {"n_bath", 8}};
    const auto result = run(spec);
    REQUIRE(result.exit_code == 0);
    const auto csv = slurp(out / "cool_surface.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "gamma,n_bath,n_final,eq15_bound");
    int rows = 0;
    for (std::string line; std::getline(lines, line);)
        if (!line.empty()) ++rows;
    CHECK(rows == 64);
    CHECK(std::filesystem::exists(out / "cool_surface.meta.json"));
}

TEST_CASE("fock-transfer experiment") {
    const auto out = fresh_dir("fock");
    auto spec = base_spec("fock-transfer", out);
    spec.grid = {6.0, 64};
    spec.extra = nlohmann::json{{"fock_n", {1.0}}, {"q_m", {1e8, 1e5}}};
    const auto result = run(spec);
    REQUIRE(result.exit_code == 0);
    REQUIRE(result.files.size() == 4);
    const auto meta = nlohmann::json::parse(slurp(out / "fock_transfer_n1_qm1e08.meta.json"));
    CHECK(meta.at("fock_n").get<int>() == 1);
    CHECK_THAT(meta.at("integral").get<double>(), Catch::Matchers::WithinAbs(1.0, 1e-2));
    // stronger decoherence grinds away the negativity
    const auto meta_low = nlohmann::json::parse(slurp(out / "fock_transfer_n1_qm100000.meta.json"));
    CHECK(meta_low.at("negativity_integrated").get<double>() <
          meta.at("negativity_integrated").get<double>());

    // emitted grids can be consumed back, bit-exact under re-serialization
    const auto loaded = load_wigner_csv(out / "fock_transfer_n1_qm1e08.csv");
    CHECK(loaded.n_points == 64);
    CHECK(loaded.extent == spec.grid.extent);
    CHECK_THAT(loaded.integral(), Catch::Matchers::WithinAbs(1.0, 1e-2));
    const auto replica = out / "replica.csv";
    write_wigner_csv(replica, loaded);
    CHECK(slurp(replica) == slurp(out / "fock_transfer_n1_qm1e08.csv"));
}

TEST_CASE("kitten experiment") {
    const auto out = fresh_dir("kitten");
    auto spec = base_spec("kitten", out);
    spec.grid = {6.0, 64};
    spec.extra = nlohmann::json{{"alpha_sq", {0.25}},
                                {"xi_lo", -0.2},
                                {"xi_hi", 0.0},
                                {"xi_steps", 11},
                                {"include_imaginary", false},
                                {"refine", false}};
    const auto result = run(spec);
    REQUIRE(result.exit_code == 0);
    const auto csv = slurp(out / "kitten.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "alpha_sq,alpha_axis,xi,infidelity_free,infidelity_thermal,xi_estimate");
    std::vector<std::array<double, 6>> rows;
    for (std::string line; std::getline(lines, line);) {
        if (line.empty()) continue;
        std::array<double, 6> row{};
        std::istringstream ls(line);
        std::string cell;
        for (double& v : row) {
            std::getline(ls, cell, ',');
            v = std::stod(cell);
        }
        rows.push_back(row);
    }
    REQUIRE(rows.size() == 11);
    // the sweep brackets the first-order optimum -alpha^2/3 = -0.0833 and the
    // infidelity dips near it
    double best_xi = 0.0, best = 1e9;
    for (const auto& r : rows) {
        if (r[3] < best) {
            best = r[3];
            best_xi = r[2];
        }
        CHECK(r[5] == -0.25 / 3.0);
    }
    CHECK_THAT(best_xi, Catch::Matchers::WithinAbs(-0.08, 0.021));
    CHECK(best < 0.01);
}

TEST_CASE("tolerance experiment") {
    const auto out = fresh_dir("tolerance");
    auto spec = base_spec("tolerance", out);
    spec.extra = nlohmann::json{{"epsilon", {1e-7, 1e-5}}};
    const auto result = run(spec);
    REQUIRE(result.exit_code == 0);
    const auto csv = slurp(out / "tolerance.csv");
    CHECK(csv.rfind("epsilon,width_numeric,width_analytic,dn_over_n\n", 0) == 0);
}

TEST_CASE("heating experiment") {
    const auto out = fresh_dir("heating");
    auto spec = base_spec("heating", out);
    spec.params_cfg.params.temperature = 0.05;
    const auto result = run(spec);
    REQUIRE(result.exit_code == 0);
    const auto j = nlohmann::json::parse(slurp(out / "heating.json"));
    const double frac = j.at("report").at("delta_n_bath_fraction").get<double>();
    CHECK(frac > 0.02);
    CHECK(frac < 0.50);
}

TEST_CASE("verify experiment is deterministic and green") {
    const auto out1 = fresh_dir("verify1");
    auto spec = base_spec("verify", out1);
    spec.seed = 42;
    spec.grid = {6.0, 128};
    spec.extra = nlohmann::json{{"n_samples", 50000.0}, {"fock_dim", 24}};
    const auto r1 = run(spec);
    CHECK(r1.exit_code == 0);

    const auto out2 = fresh_dir("verify2");
    spec.output_dir = out2.string();
    spec.threads = 1;
    const auto r2 = run(spec);
    CHECK(r2.exit_code == 0);
    CHECK(slurp(out1 / "verify.json") == slurp(out2 / "verify.json"));
}

TEST_CASE("experiment spec parsing") {
    SECTION("unknown experiment name") {
        ExperimentSpec spec;
        spec.name = "nonsense";
        CHECK_THROWS_AS(run(spec), ConfigError);
    }
    SECTION("config keys flow through") {
        const nlohmann::json cfg{{"temperature_k", 0.05},
                                 {"seed", 7},
                                 {"output_dir", "somewhere"},
                                 {"grid", {{"extent", 5.0}, {"n_points", 128}}},
                                 {"tolerance", {{"n_bath", 2e4}}}};
        const auto spec = spec_from_config("tolerance", cfg);
        CHECK(spec.params_cfg.params.temperature == 0.05);
        CHECK(spec.seed == 7);
        CHECK(spec.output_dir == "somewhere");
        CHECK(spec.grid.n_points == 128);
        CHECK(spec.extra.at("n_bath").get<double>() == 2e4);
    }
    SECTION("bad blocks are config errors") {
        CHECK_THROWS_AS(spec_from_config("kitten", nlohmann::json{{"kitten", 3}}), ConfigError);
        CHECK_THROWS_AS(spec_from_config("kitten", nlohmann::json{{"seed", -1}}), ConfigError);
        CHECK_THROWS_AS(spec_from_config("kitten", nlohmann::json{{"eta_l", 2.0}}), ConfigError);
    }
}

TEST_CASE("csv numeric format round-trips doubles") {
    CHECK(fmt_g17(1.0) == "1");
    CHECK(fmt_g17(0.1) == "0.10000000000000001");
    const double v = -7.719364813208734e5;
    CHECK(std::stod(fmt_g17(v)) == v);
    // byte-identical reruns
    std::vector<std::vector<double>> rows{{1.0 / 3.0, 2.0 / 7.0}};
    CHECK(csv_content({"a", "b"}, rows) == csv_content({"a", "b"}, rows));
}

TEST_CASE("cool-surface CSV reruns are byte-identical") {
    const auto out1 = fresh_dir("det1");
    const auto out2 = fresh_dir("det2");
    auto spec = base_spec("cool-surface", out1);
    spec.extra = nlohmann::json{{"n_gamma", 6}, {"n_bath", 6}};
    run(spec);
    spec.output_dir = out2.string();
    spec.threads = 1;
    run(spec);
    CHECK(slurp(out1 / "cool_surface.csv") == slurp(out2 / "cool_surface.csv"));
}
