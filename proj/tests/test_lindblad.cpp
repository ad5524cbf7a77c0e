#include <catch2/catch_amalgamated.hpp>

#include "jch/lindblad.hpp"

#include <cmath>

using namespace jch;

static SimulationConfig cfg_of(int N0, double g, double kappa, double gamma) {
    SimulationConfig cfg;
    cfg.M = 2;
    cfg.N0 = N0;
    cfg.g = g;
    cfg.kappa = kappa;
    cfg.gamma = gamma;
    return cfg;
}

TEST_CASE("g2 of a Fock state is 1 - 1/n") {
    const int n_max = 4, d = 2 * (n_max + 1), D = d * d;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(D, D);
    int i0 = 4 * d; // |n=4, g> x |vac, g>
    rho(i0, i0) = 1.0;
    CHECK(g2_local(rho, 0, n_max) == Catch::Approx(0.75).margin(1e-14));
    CHECK(std::isnan(g2_local(rho, 1, n_max))); // vacuum: undefined sentinel
}

TEST_CASE("g2 of a coherent state is one") {
    const int n_max = 7, nph = n_max + 1, d = 2 * nph, D = d * d;
    const double nbar = 0.1;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(D, D);
    double norm = 0.0, fact = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) fact *= n;
        double p = std::exp(-nbar) * std::pow(nbar, n) / fact;
        rho(n * d, n * d) = p; // diagonal suffices for g2
        norm += p;
    }
    rho /= norm;
    CHECK(g2_local(rho, 0, n_max) == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("g2 rejects malformed input") {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(10, 10);
    CHECK_THROWS_AS(g2_local(rho, 0, 4), std::invalid_argument);
    Eigen::MatrixXcd ok = Eigen::MatrixXcd::Identity(100, 100) / 100.0;
    CHECK_THROWS_AS(g2_local(ok, 2, 4), std::invalid_argument);
}

TEST_CASE("lossless master equation reproduces the closed-system solver") {
    SimulationConfig cfg = cfg_of(2, 1.3, 0.0, 0.0);
    cfg.t_max = 10.0;
    cfg.sample_dt = 0.05;
    auto lb = evolve_master(cfg);
    auto ex = evolve_exact(cfg);
    REQUIRE(lb.num_samples() == ex.num_samples());
    double max_dev = 0.0;
    for (std::size_t i = 0; i < lb.num_samples(); ++i)
        for (int j = 0; j < 2; ++j)
            max_dev = std::max(max_dev, std::abs(lb.photon[i][j] - ex.photon[i][j]));
    CHECK(max_dev < 1e-8);
}

TEST_CASE("trace, hermiticity and positivity hold through a lossy run") {
    SimulationConfig cfg = cfg_of(3, 4.0, 0.05, 0.05);
    cfg.t_max = 10.0;
    cfg.sample_dt = 0.1;
    auto traj = evolve_master(cfg);
    for (double tr : traj.monitors.at("trace")) CHECK(std::abs(tr - 1.0) < 1e-8);
    for (double h : traj.monitors.at("herm_defect")) CHECK(h < 1e-10);
    for (double e : traj.monitors.at("min_eig")) CHECK(e >= -1e-7);
}

TEST_CASE("total excitation decays monotonically under loss") {
    SimulationConfig cfg = cfg_of(2, 2.0, 0.1, 0.1);
    cfg.t_max = 10.0;
    cfg.sample_dt = 0.1;
    auto traj = evolve_master(cfg);
    const auto& N = traj.monitors.at("N_total");
    for (std::size_t i = 1; i < N.size(); ++i)
        REQUIRE(N[i] <= N[i - 1] + 1e-8);
    CHECK(N.back() < N.front());
}

TEST_CASE("with g=0 and the TLS in the ground state photons see only kappa") {
    SimulationConfig a_cfg = cfg_of(2, 0.0, 0.4, 0.9);
    SimulationConfig b_cfg = cfg_of(2, 0.0, 0.4, 0.2); // swapped/altered gamma
    a_cfg.t_max = b_cfg.t_max = 5.0;
    a_cfg.sample_dt = b_cfg.sample_dt = 0.1;
    auto a = evolve_master(a_cfg);
    auto b = evolve_master(b_cfg);
    for (std::size_t i = 0; i < a.num_samples(); ++i)
        for (int j = 0; j < 2; ++j)
            REQUIRE(std::abs(a.photon[i][j] - b.photon[i][j]) < 1e-9);
}

TEST_CASE("cutoff and scope preconditions are enforced") {
    SimulationConfig cfg = cfg_of(4, 1.0, 0.05, 0.05);
    cfg.n_max = 2; // N0 > n_max
    CHECK_THROWS_AS(evolve_master(cfg), std::invalid_argument);
    SimulationConfig big = cfg_of(2, 1.0, 0.05, 0.05);
    big.M = 4;
    CHECK_THROWS_AS(evolve_master(big), std::invalid_argument);
    SimulationConfig over = cfg_of(7, 1.0, 0.05, 0.05);
    over.dim_budget = 1000;
    CHECK_THROWS_AS(evolve_master(over), CapacityError);
}

TEST_CASE("transition chart flags lossless vs lossy backends") {
    SimulationConfig tmpl = cfg_of(1, 1.0, 0.05, 0.05);
    tmpl.t_max = 2.0;
    tmpl.sample_dt = 0.1;
    auto lossless = transition_chart(tmpl, {1.0, 5.0}, {1}, false);
    auto lossy = transition_chart(tmpl, {1.0}, {1}, true);
    REQUIRE(lossless.size() == 2);
    for (const auto& r : lossless) {
        CHECK(r.ok);
        CHECK(r.backend.substr(0, 5) == "exact");
        CHECK(std::abs(r.zbar) <= 1.0);
    }
    REQUIRE(lossy.size() == 1);
    CHECK(lossy[0].ok);
    CHECK(lossy[0].backend == "lindblad");
}
