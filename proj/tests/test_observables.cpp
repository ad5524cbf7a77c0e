#include <catch2/catch_amalgamated.hpp>

#include "jch/observables.hpp"

#include <cmath>
#include <random>

using namespace jch;

TEST_CASE("imbalance basics") {
    CHECK(imbalance({4, 4, 4, 0, 0, 0}, 6) == Catch::Approx(1.0));
    CHECK(imbalance({1, 1, 1, 1}, 4) == Catch::Approx(0.0).margin(1e-15));
    CHECK(imbalance({3, 1}, 2) == Catch::Approx(0.5));
}

TEST_CASE("imbalance is undefined at zero total photons") {
    CHECK(!is_defined(imbalance({0.0, 0.0}, 2)));
}

TEST_CASE("imbalance is scale invariant and antisymmetric under reflection") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(0.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> n(6);
        for (auto& x : n) x = dist(rng);
        double z = imbalance(n, 6);
        if (!is_defined(z)) continue;
        std::vector<double> scaled = n;
        for (auto& x : scaled) x *= 16.0; // power of two: bit-exact scaling
        CHECK(imbalance(scaled, 6) == z);
        std::vector<double> scaled2 = n;
        for (auto& x : scaled2) x *= 17.5;
        CHECK(imbalance(scaled2, 6) == Catch::Approx(z).margin(1e-14));
        std::vector<double> rev(n.rbegin(), n.rend());
        CHECK(imbalance(rev, 6) == Catch::Approx(-z).margin(1e-15));
    }
}

TEST_CASE("time average of a constant is the constant") {
    std::vector<double> t, v;
    for (int i = 0; i <= 200; ++i) {
        t.push_back(0.1 * i);
        v.push_back(3.25);
    }
    auto avg = time_average(t, v, 0.0, 20.0);
    CHECK(avg.value == Catch::Approx(3.25).margin(1e-14));
    CHECK(!avg.clipped);
}

TEST_CASE("time average of cos(2Jt) over tJ in [0,20] matches sin(40)/40") {
    // closed form: (1/20) * integral_0^20 cos(2t) dt = sin(40)/40
    const double expected = std::sin(40.0) / 40.0; // ~ 0.0186278
    std::vector<double> t, v;
    for (int i = 0; i <= 2000; ++i) {
        t.push_back(0.01 * i);
        v.push_back(std::cos(2.0 * t.back()));
    }
    auto avg = time_average(t, v, 0.0, 20.0);
    CHECK(avg.value == Catch::Approx(expected).margin(1e-4));
}

TEST_CASE("time average is invariant under refinement of a piecewise-linear series") {
    std::vector<double> t = {0.0, 1.0, 3.0, 4.0};
    std::vector<double> v = {1.0, 2.0, -1.0, 0.5};
    auto coarse = time_average(t, v, 0.0, 4.0);
    // resample onto a 10x finer grid by linear interpolation
    std::vector<double> tf, vf;
    for (int i = 0; i <= 400; ++i) {
        double x = 0.01 * i;
        tf.push_back(x);
        std::size_t k = 0;
        while (k + 2 < t.size() && t[k + 1] < x) ++k;
        double f = (x - t[k]) / (t[k + 1] - t[k]);
        vf.push_back(v[k] + f * (v[k + 1] - v[k]));
    }
    auto fine = time_average(tf, vf, 0.0, 4.0);
    CHECK(fine.value == Catch::Approx(coarse.value).margin(1e-12));
}

TEST_CASE("undefined samples are skipped with weight renormalization") {
    std::vector<double> t = {0.0, 1.0, 2.0, 3.0, 4.0};
    std::vector<double> v = {2.0, 2.0, kUndefined, 4.0, 4.0};
    auto avg = time_average(t, v, 0.0, 4.0);
    // defined segments: [0,1] at 2 and [3,4] at 4
    CHECK(avg.value == Catch::Approx(3.0));
    CHECK(avg.undefined_fraction == Catch::Approx(0.5));
}

TEST_CASE("window clipping to the series support is flagged") {
    std::vector<double> t = {0.0, 1.0, 2.0};
    std::vector<double> v = {1.0, 1.0, 1.0};
    auto avg = time_average(t, v, 0.0, 20.0);
    CHECK(avg.clipped);
    CHECK(avg.value == Catch::Approx(1.0));
}

TEST_CASE("fully undefined window throws") {
    std::vector<double> t = {0.0, 1.0, 2.0};
    std::vector<double> v = {kUndefined, kUndefined, kUndefined};
    CHECK_THROWS_AS(time_average(t, v, 0.0, 2.0), std::invalid_argument);
}
