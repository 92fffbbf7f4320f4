#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "omswap/oracle.hpp"

using namespace omswap;
using namespace omswap::oracle;

namespace {

DerivedQuantities lossless() {
    DerivedQuantities d;
    d.sigma = 1.0;
    d.epsilon = 0.0;
    d.eta_m = 1.0;
    return d;
}

ProtocolMap ideal_swap() {
    return protocol_map(chi_for_mu({1, 1, 1}, 1, 1, 1), lossless(), 1.0, 0.0);
}

}  // namespace

TEST_CASE("philox4x32-10 known-answer vectors") {
    // reference vectors published with the original counter-based RNG suite
    const auto zeros = Philox4x32::block({0u, 0u, 0u, 0u}, {0u, 0u});
    CHECK(zeros[0] == 0x6627e8d5u);
    CHECK(zeros[1] == 0xe169c58du);
    CHECK(zeros[2] == 0xbc57ac4cu);
    CHECK(zeros[3] == 0x9b00dbd8u);

    const auto ones = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                        {0xffffffffu, 0xffffffffu});
    CHECK(ones[0] == 0x408f276du);
    CHECK(ones[1] == 0x41c83b0eu);
    CHECK(ones[2] == 0xa20bc7c6u);
    CHECK(ones[3] == 0x6d5451fdu);

    const auto pi = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                      {0xa4093822u, 0x299f31d0u});
    CHECK(pi[0] == 0xd16cfe09u);
    CHECK(pi[1] == 0x94fdccebu);
    CHECK(pi[2] == 0x5001e420u);
    CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("normal stream moments") {
    double sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const auto z = normal_pair(12345, 0, static_cast<std::uint64_t>(i));
        sum += z[0] + z[1];
        sum2 += z[0] * z[0] + z[1] * z[1];
    }
    const double mean = sum / (2.0 * n);
    const double var = sum2 / (2.0 * n) - mean * mean;
    CHECK_THAT(mean, Catch::Matchers::WithinAbs(0.0, 0.01));
    CHECK_THAT(var, Catch::Matchers::WithinAbs(1.0, 0.01));
}

TEST_CASE("monte-carlo covariance") {
    SECTION("identity channel on vacuum") {
        ProtocolMap ident;
        McConfig cfg;
        cfg.n_samples = 200000;
        cfg.seed = 42;
        const auto r = mc_covariance(ident, Mat4::Identity(), cfg);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const double expect = (i == j) ? 1.0 : 0.0;
                CHECK(std::abs(r.cov(i, j) - expect) <= 5.0 * r.se(i, j));
            }
    }
    SECTION("ideal swap cools the thermal mechanics to vacuum") {
        McConfig cfg;
        cfg.n_samples = 200000;
        cfg.seed = 7;
        const Mat4 v_in = thermal_vacuum_state(10.0).cov;
        const auto r = mc_covariance(ideal_swap(), v_in, cfg);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const double expect = (i == j) ? 1.0 : 0.0;
                CHECK(std::abs(r.cov(i, j) - expect) <= 5.0 * r.se(i, j));
            }
    }
    SECTION("bit-identical across repeats and thread counts") {
        const auto d = derive_quantities(reference_microstring_params(4.0));
        const auto pm = protocol_map(chi_for_mu({1, 1, 1}, 1.0, d.eta_m, d.sigma), d, 1.0, d.n_bath);
        McConfig cfg;
        cfg.n_samples = 20000;
        cfg.seed = 99;
        const auto a = mc_covariance(pm, thermal_vacuum_state(d.n_bath).cov, cfg, 1);
        const auto b = mc_covariance(pm, thermal_vacuum_state(d.n_bath).cov, cfg, 4);
        CHECK((a.cov.array() == b.cov.array()).all());
        CHECK((a.se.array() == b.se.array()).all());
    }
    SECTION("non-PSD inputs are rejected before sampling") {
        ProtocolMap ident;
        Mat4 bad = Mat4::Identity();
        bad(0, 1) = bad(1, 0) = 2.0;
        McConfig cfg;
        cfg.n_samples = 10000;
        CHECK_THROWS_AS(mc_covariance(ident, bad, cfg), std::invalid_argument);
    }
    SECTION("sample-size floor") {
        ProtocolMap ident;
        McConfig cfg;
        cfg.n_samples = 100;
        CHECK_THROWS_AS(mc_covariance(ident, Mat4::Identity(), cfg), std::invalid_argument);
    }
}

TEST_CASE("number-basis protocol oracle") {
    const int dim = 24;
    FockSimConfig cfg;
    cfg.dim_m = cfg.dim_l = dim;

    SECTION("perfect swap transfers the single photon") {
        cfg.chi = {-1.0, -1.0, -1.0};
        const auto r = fock_protocol_oracle(cfg, fock_vector(0, dim), fock_vector(1, dim));
        CHECK(r.leakage < 1e-8);
        Eigen::MatrixXcd target = Eigen::MatrixXcd::Zero(dim, dim);
        target(1, 1) = 1.0;
        CHECK(trace_distance(r.rho_m, target) < 1e-6);
    }
    SECTION("vacuum in, vacuum out") {
        cfg.chi = {-1.0, -1.0, -1.0};
        const auto r = fock_protocol_oracle(cfg, fock_vector(0, dim), fock_vector(0, dim));
        CHECK_THAT(std::abs(r.rho_m(0, 0)), Catch::Matchers::WithinAbs(1.0, 1e-8));
    }
    SECTION("detuned middle pulse produces the squeezed single quantum") {
        const double xi = -0.1;
        const auto plan = chi_for_mu({1.0, std::exp(-xi), 1.0}, 1.0, 1.0, 1.0);
        cfg.chi = plan.chi;
        const auto r = fock_protocol_oracle(cfg, fock_vector(0, dim), fock_vector(1, dim));
        const Eigen::VectorXcd sq1 =
            (squeeze_operator(xi, dim) * Eigen::MatrixXd::Identity(dim, dim).col(1)).cast<cplx>();
        CHECK(trace_distance(r.rho_m, sq1 * sq1.adjoint()) < 1e-4);
    }
    SECTION("undersized truncation trips the leakage monitor") {
        FockSimConfig small;
        small.dim_m = small.dim_l = 8;
        small.chi = {-3.0, -3.0, -3.0};
        CHECK_THROWS_AS(fock_protocol_oracle(small, fock_vector(0, 8), fock_vector(3, 8)),
                        std::runtime_error);
    }
    SECTION("dimension floor") {
        FockSimConfig tiny;
        tiny.dim_m = tiny.dim_l = 4;
        CHECK_THROWS_AS(fock_protocol_oracle(tiny, fock_vector(0, 4), fock_vector(0, 4)),
                        std::invalid_argument);
    }
}

TEST_CASE("density-matrix wigner synthesis") {
    const int dim = 24;
    const WignerGridSpec grid{6.0, 128};

    SECTION("coherent state is a displaced Gaussian") {
        const auto v = coherent_vector(cplx(1.0, 0.0), dim);
        const auto w = dm_wigner(v * v.adjoint(), grid);
        Eigen::Vector2d mean;
        mean << 2.0, 0.0;  // <X> = 2 Re alpha
        const auto target = analytic_wigner(StateSpec::gaussian(mean, Mat2::Identity()), grid);
        CHECK((w.values - target.values).abs().maxCoeff() < 1e-8);
    }
    SECTION("fock and cat closed forms are reproduced") {
        Eigen::MatrixXcd rho1 = Eigen::MatrixXcd::Zero(dim, dim);
        rho1(1, 1) = 1.0;
        const auto w1 = dm_wigner(rho1, grid);
        const auto t1 = analytic_wigner(StateSpec::fock(1), grid);
        CHECK((w1.values - t1.values).abs().maxCoeff() < 1e-10);

        const auto vc = cat_vector(cplx(1.0, 0.0), -1, dim);
        const auto wc = dm_wigner(vc * vc.adjoint(), grid);
        const auto tc = analytic_wigner(StateSpec::cat(cplx(1.0, 0.0), -1), grid);
        CHECK((wc.values - tc.values).abs().maxCoeff() < 1e-8);
    }
    SECTION("oracle output matches the characteristic-function pipeline") {
        FockSimConfig cfg;
        cfg.dim_m = cfg.dim_l = 32;
        cfg.chi = {-1.0, -1.0, -1.0};
        const auto r = fock_protocol_oracle(cfg, fock_vector(0, 32), fock_vector(1, 32));
        const WignerGridSpec full{};  // default grid
        const auto w_dm = dm_wigner(r.rho_m, full);
        const auto cf = reduce_to_mechanics(evolve_joint_cf(
            make_cf(StateSpec::vacuum()), make_cf(StateSpec::fock(1)), ideal_swap()));
        const auto w_cf = wigner_grid(cf, full);
        CHECK((w_dm.values - w_cf.values).abs().maxCoeff() < 1e-4);
    }
}

TEST_CASE("trace distance basics") {
    const int dim = 6;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd b = a;
    a(0, 0) = 1.0;
    b(1, 1) = 1.0;
    CHECK_THAT(trace_distance(a, a), Catch::Matchers::WithinAbs(0.0, 1e-14));
    CHECK_THAT(trace_distance(a, b), Catch::Matchers::WithinAbs(1.0, 1e-14));
}
