#include <catch2/catch_amalgamated.hpp>

#include "jch/mps.hpp"
#include "jch/tebd.hpp"

#include <cstdio>
#include <random>

using namespace jch;

static SimulationConfig cfg_of(int M, int N0, double g, int n_max = -1) {
    SimulationConfig cfg;
    cfg.M = M;
    cfg.N0 = N0;
    cfg.g = g;
    cfg.n_max = n_max;
    return cfg;
}

TEST_CASE("product-state MPS encodes the half-filled configuration") {
    SimulationConfig cfg = cfg_of(4, 3, 1.0, 3);
    auto mps = mps_from_product(cfg);
    SECTION("every bond dimension is one") {
        for (int b = 0; b <= 4; ++b) CHECK(mps.bond_dim(b) == 1);
    }
    SECTION("site occupations are exact") {
        Eigen::VectorXd n_diag(mps.local_dim());
        for (int p = 0; p < mps.local_dim(); ++p) n_diag(p) = p % (cfg.n_max + 1);
        CHECK(mps.expect_diagonal(0, n_diag) == Catch::Approx(3.0).margin(1e-14));
        CHECK(mps.expect_diagonal(1, n_diag) == Catch::Approx(3.0).margin(1e-14));
        CHECK(mps.expect_diagonal(2, n_diag) == Catch::Approx(0.0).margin(1e-14));
    }
    SECTION("bond charges accumulate the left excitation") {
        CHECK(mps.bond_charge(0) == std::vector<int>{0});
        CHECK(mps.bond_charge(2) == std::vector<int>{6});
        CHECK(mps.bond_charge(4) == std::vector<int>{6});
    }
    SECTION("contraction against the exact sector vector has fidelity one") {
        auto basis = enumerate_subspace(4, 3, 6);
        Vec v = mps.sector_vector(basis);
        Vec ref = build_initial_state(basis, cfg);
        CHECK(std::abs(v.dot(ref)) == Catch::Approx(1.0).margin(1e-14));
    }
}

TEST_CASE("invalid cutoff is rejected") {
    SimulationConfig cfg = cfg_of(2, 4, 1.0, 2);
    CHECK_THROWS_AS(mps_from_product(cfg), std::invalid_argument);
}

TEST_CASE("gates are unitary") {
    SECTION("site gate") {
        auto U = site_gate(3, 0.0, 0.0, 2.7, 0.13);
        Eigen::MatrixXcd G = U.adjoint() * U;
        CHECK((G - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-12);
    }
    SECTION("hopping gate applied to random two-site states preserves norm") {
        auto G = hopping_gate(2, 1.0, 0.07);
        std::mt19937 rng(5);
        std::normal_distribution<double> dist;
        Eigen::MatrixXcd Gd(G);
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::VectorXcd psi(Gd.cols());
            for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = cd(dist(rng), dist(rng));
            psi.normalize();
            REQUIRE(std::abs((Gd * psi).norm() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("two-site gate on an MPS matches the dense calculation") {
    // dimer, N0=2: apply one hopping gate and compare amplitudes with the
    // dense matrix exponential acting on the product state
    SimulationConfig cfg = cfg_of(2, 2, 0.0, 2);
    auto mps = mps_from_product(cfg);
    auto G = hopping_gate(2, 1.0, 0.3);
    mps.apply_two_site(0, G, 64);
    auto basis = enumerate_subspace(2, 2, 2);
    Vec v = mps.sector_vector(basis);

    Eigen::MatrixXcd Gd(G);
    const int d = 6;
    Eigen::VectorXcd dense = Eigen::VectorXcd::Zero(d * d);
    dense(2 * d + 0) = 1.0; // |n=2> x |n=0>, both TLS ground
    dense = Gd * dense;
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        int p = basis.local_index(basis.state(i), 0);
        int q = basis.local_index(basis.state(i), 1);
        REQUIRE(std::abs(v[i] - dense(p * d + q)) < 1e-12);
    }
    CHECK(std::abs(mps.site_norm(0) - 1.0) < 1e-12);
}

TEST_CASE("truncation to chi=1 renormalizes and records the lost weight") {
    SimulationConfig cfg = cfg_of(2, 2, 0.0, 2);
    auto mps = mps_from_product(cfg);
    auto G = hopping_gate(2, 1.0, 0.4);
    double lost = mps.apply_two_site(0, G, 1);
    CHECK(lost > 0.0);
    CHECK(mps.discarded_weight() == Catch::Approx(lost));
    CHECK(mps.bond_dim(1) == 1);
    CHECK(std::abs(mps.site_norm(0) - 1.0) < 1e-12);
}

TEST_CASE("bond dimensions never exceed the cap during evolution") {
    SimulationConfig cfg = cfg_of(4, 2, 0.5, 2);
    cfg.t_max = 3.0;
    cfg.sample_dt = 0.1;
    auto mps = mps_from_product(cfg);
    auto G = hopping_gate(2, 1.0, 0.05);
    for (int step = 0; step < 30; ++step) {
        for (int j = 0; j + 1 < 4; j += 2) mps.apply_two_site(j, G, 5);
        for (int j = 1; j + 1 < 4; j += 2) mps.apply_two_site(j, G, 5);
        for (int b = 0; b <= 4; ++b) REQUIRE(mps.bond_dim(b) <= 5);
    }
}

TEST_CASE("checkpoint round-trips bit-for-bit") {
    SimulationConfig cfg = cfg_of(4, 1, 1.5, 1);
    auto mps = mps_from_product(cfg);
    auto G = hopping_gate(1, 1.0, 0.11);
    auto U = site_gate(1, 0.0, 0.0, 1.5, 0.055);
    for (int j = 0; j < 4; ++j) mps.apply_single_site(j, U);
    for (int j = 0; j + 1 < 4; j += 2) mps.apply_two_site(j, G, 16);

    std::string path = "mps_checkpoint_test.bin";
    mps.save(path);
    auto loaded = MPSState::load(path);
    std::remove(path.c_str());

    auto basis = enumerate_subspace(4, 1, 2);
    Vec a = mps.sector_vector(basis);
    Vec b = loaded.sector_vector(basis);
    REQUIRE(a.size() == b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        REQUIRE(a[i] == b[i]); // exact: doubles serialized verbatim
    CHECK(loaded.discarded_weight() == mps.discarded_weight());
}
