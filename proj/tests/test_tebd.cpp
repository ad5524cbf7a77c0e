#include <catch2/catch_amalgamated.hpp>

#include "jch/tebd.hpp"

#include <cmath>

using namespace jch;

static SimulationConfig cfg_of(int M, int N0, double g, int n_max = -1) {
    SimulationConfig cfg;
    cfg.M = M;
    cfg.N0 = N0;
    cfg.g = g;
    cfg.n_max = n_max;
    return cfg;
}

TEST_CASE("g=0 dimer reproduces the analytic hopping oscillation") {
    SimulationConfig cfg = cfg_of(2, 1, 0.0, 1);
    cfg.t_max = 10.0;
    auto traj = evolve_tebd(cfg, 8, 0.01);
    for (std::size_t i = 0; i < traj.num_samples(); ++i) {
        double c2 = std::pow(std::cos(traj.times[i]), 2);
        REQUIRE(std::abs(traj.photon[i][0] - c2) < 1e-8);
    }
}

TEST_CASE("TEBD matches exact diagonalization on a small array") {
    SimulationConfig cfg = cfg_of(4, 1, 1.0);
    auto exact = evolve_exact(cfg);
    auto tebd = evolve_tebd(cfg, 32, 0.001);
    REQUIRE(exact.num_samples() == tebd.num_samples());
    double max_dev = 0.0;
    for (std::size_t i = 0; i < exact.num_samples(); ++i)
        for (int j = 0; j < 4; ++j)
            max_dev = std::max(max_dev, std::abs(exact.photon[i][j] - tebd.photon[i][j]));
    CHECK(max_dev < 1e-6);
}

TEST_CASE("total excitation is conserved through the sweep") {
    SimulationConfig cfg = cfg_of(4, 2, 2.0);
    cfg.t_max = 10.0;
    cfg.sample_dt = 0.1;
    auto traj = evolve_tebd(cfg, 48, 0.02);
    for (double n : traj.monitors.at("N_total"))
        REQUIRE(std::abs(n - 4.0) <= 0.04); // the 1% tolerance, enforced inside too
}

TEST_CASE("halving the Trotter step changes site occupations quadratically") {
    SimulationConfig cfg = cfg_of(4, 2, 2.0);
    cfg.t_max = 5.0;
    cfg.sample_dt = 0.25;
    auto a = evolve_tebd(cfg, 64, 0.02);
    auto b = evolve_tebd(cfg, 64, 0.01);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < a.num_samples(); ++i)
        for (int j = 0; j < 4; ++j)
            max_dev = std::max(max_dev, std::abs(a.photon[i][j] - b.photon[i][j]));
    CHECK(max_dev < 1e-4);
}

TEST_CASE("doubling chi leaves the converged imbalance unchanged") {
    SimulationConfig cfg = cfg_of(4, 2, 1.0);
    cfg.t_max = 10.0;
    cfg.sample_dt = 0.1;
    double z1 = mean_imbalance(evolve_tebd(cfg, 32, 0.02), 0.0, 10.0).value;
    double z2 = mean_imbalance(evolve_tebd(cfg, 64, 0.02), 0.0, 10.0).value;
    CHECK(std::abs(z1 - z2) < 1e-3);
}

TEST_CASE("invalid step and cap are rejected") {
    SimulationConfig cfg = cfg_of(2, 1, 1.0);
    CHECK_THROWS_AS(evolve_tebd(cfg, 8, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(evolve_tebd(cfg, 0, 0.01), std::invalid_argument);
}

TEST_CASE("zbar surface prefers exact for small sectors and flags failures") {
    SimulationConfig cfg = cfg_of(2, 1, 1.0);
    cfg.t_max = 5.0;
    auto rows = zbar_surface(cfg, {0.5, 2.0}, {2}, {1, 2});
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.ok);
        CHECK(r.backend.substr(0, 5) == "exact");
    }
}
