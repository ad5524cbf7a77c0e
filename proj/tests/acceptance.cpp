// acceptance — end-to-end gate: one PASS/FAIL line per criterion, raw values
// printed alongside so thresholds can be audited. Exit code is the number of
// failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "jch/compare.hpp"
#include "jch/lindblad.hpp"
#include "jch/semiclassical.hpp"
#include "jch/tebd.hpp"

using namespace jch;

namespace {

int g_failures = 0;

void report(int id, const std::string& what, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", id,
                what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

SimulationConfig base_cfg() {
    SimulationConfig cfg;
    cfg.t_max = 20.0;
    return cfg;
}

// Semiclassical transition point: Zbar(g) crossing 0.5 on a linear grid
// bracketing the expected critical coupling.
std::optional<double> sc_transition(int M, int N0) {
    SimulationConfig cfg = base_cfg();
    cfg.M = M;
    cfg.N0 = N0;
    double gc = 2.8 * std::sqrt(double(N0));
    std::vector<double> gs, zs;
    // wide bracket (the N0=1 crossing sits far above gc), fine enough that the
    // first-crossing locator is not dominated by grid noise in the crossover
    for (int i = 0; i <= 80; ++i) gs.push_back((0.4 + 2.0 * i / 80.0) * gc);
    for (double g : gs) {
        cfg.g = g;
        zs.push_back(mean_imbalance(sc_evolve(cfg)).value);
    }
    return locate_transition(gs, zs, 0.5);
}

double max_drift(const Trajectory& traj, double expected) {
    double d = 0.0;
    for (double n : traj.monitors.at("N_total")) d = std::max(d, std::abs(n - expected));
    return d;
}

} // namespace

int main() {
    // ---- 1. semiclassical critical coupling, M=2, N0 in {1,4,9} ----
    {
        bool pass = true;
        std::string detail;
        for (int n0 : {1, 4, 9}) {
            double gc = 2.8 * std::sqrt(double(n0));
            auto gt = sc_transition(2, n0);
            bool ok = gt && std::abs(*gt - gc) <= 0.1 * gc;
            pass = pass && ok;
            detail += "N0=" + std::to_string(n0) + ": g*=" +
                      (gt ? num(*gt) : "none") + " vs 2.8*sqrt(N0)=" + num(gc) + "; ";
        }
        report(1, "semiclassical g_c within 10% of 2.8*sqrt(N0)*J", pass, detail);
    }

    // ---- 2. semiclassical size-independence, N0=4, M in {2,4,6,8} ----
    {
        std::vector<double> locs;
        std::string detail;
        bool all_found = true;
        for (int m : {2, 4, 6, 8}) {
            auto gt = sc_transition(m, 4);
            if (gt) locs.push_back(*gt);
            else all_found = false;
            detail += "M=" + std::to_string(m) + ": g*=" + (gt ? num(*gt) : "none") + "; ";
        }
        double lo = *std::min_element(locs.begin(), locs.end());
        double hi = *std::max_element(locs.begin(), locs.end());
        bool pass = all_found && (hi - lo) / lo < 0.10;
        report(2, "transition location varies < 10% across M", pass,
               detail + "spread=" + num((hi - lo) / lo * 100.0) + "%");
    }

    // ---- 3 & 4. TEBD frozen domain + excitation conservation ----
    {
        SimulationConfig cfg = base_cfg();
        cfg.M = 6;
        cfg.N0 = 4;
        cfg.g = 15.0;
        cfg.n_max = 7;
        cfg.chi = 100;
        cfg.trotter_dt = 0.02;
        cfg.sample_dt = 0.1;
        auto frozen = evolve_tebd(cfg);
        double min_left = 1.0;
        for (std::size_t i = 0; i < frozen.num_samples(); ++i) {
            double left = frozen.photon[i][0] + frozen.photon[i][1] + frozen.photon[i][2];
            double all = left + frozen.photon[i][3] + frozen.photon[i][4] + frozen.photon[i][5];
            min_left = std::min(min_left, left / all);
        }
        cfg.g = 0.1;
        auto mobile = evolve_tebd(cfg);
        double z_mobile = mean_imbalance(mobile).value;
        bool pass3 = min_left >= 0.98 && z_mobile < 0.1;
        report(3, "g=15J keeps >=98% of photons on sites 1-3; g=0.1J has Zbar < 0.1",
               pass3, "min left fraction=" + num(min_left) +
                          ", Zbar(g=0.1)=" + num(z_mobile));

        double drift_tebd =
            std::max(max_drift(frozen, 12.0), max_drift(mobile, 12.0)) / 12.0;
        SimulationConfig ecfg = base_cfg();
        ecfg.M = 2;
        ecfg.N0 = 4;
        ecfg.g = 15.0;
        double drift_exact = max_drift(evolve_exact(ecfg), 4.0);
        bool pass4 = drift_tebd <= 0.01 && drift_exact <= 1e-10;
        report(4, "excitation drift <= 1% (TEBD) and <= 1e-10 (exact)", pass4,
               "TEBD relative drift=" + num(drift_tebd) +
                   ", exact drift=" + num(drift_exact));
    }

    // ---- 5. N0=1 never freezes up to g = 100J ----
    {
        bool pass = true;
        std::string detail;
        for (int m : {2, 4, 6}) {
            double worst = 0.0;
            for (double g : {0.1, 1.0, 3.0, 10.0, 30.0, 100.0}) {
                SimulationConfig cfg = base_cfg();
                cfg.M = m;
                cfg.N0 = 1;
                cfg.g = g;
                worst = std::max(worst, mean_imbalance(evolve_exact(cfg)).value);
            }
            pass = pass && worst < 0.5;
            detail += "M=" + std::to_string(m) + ": max Zbar=" + num(worst) + "; ";
        }
        report(5, "N0=1 keeps Zbar < 0.5 for g up to 100J", pass, detail);
    }

    // ---- 6. eigenmode dichotomy at g = 50J (epsilon_C = 1e-3) ----
    {
        SimulationConfig cfg = base_cfg();
        cfg.M = 2;
        cfg.N0 = 4;
        cfg.g = 50.0;
        auto a4 = spectral_overlaps(cfg);
        // modes carrying > 99% of the overlap, scanned in descending overlap
        std::vector<const ModeInfo*> sorted;
        for (const auto& m : a4.modes) sorted.push_back(&m);
        std::sort(sorted.begin(), sorted.end(),
                  [](auto* x, auto* y) { return x->overlap > y->overlap; });
        double cum = 0.0, max_c4 = 0.0;
        for (const auto* m : sorted) {
            if (cum >= 0.99) break;
            cum += m->overlap;
            max_c4 = std::max(max_c4, m->current);
        }
        cfg.N0 = 1;
        auto a1 = spectral_overlaps(cfg);
        double best_c1 = 0.0;
        for (const auto& m : a1.modes)
            if (m.overlap > 0.01) best_c1 = std::max(best_c1, m.current);
        bool pass = max_c4 < 1e-3 && best_c1 > 1e-3;
        report(6, "N0=4 dominant modes have C < 1e-3; an N0=1 mode has C > 1e-3", pass,
               "max C (N0=4, 99% overlap)=" + num(max_c4) +
                   ", max C (N0=1, overlap>0.01)=" + num(best_c1) +
                   " [note: the N0=4 currents scale as J/g; ~0.02 at g=50J]");
    }

    // ---- 7. oracle equivalence across backends ----
    Trajectory lb_unitary;
    {
        SimulationConfig cfg = base_cfg();
        cfg.M = 4;
        cfg.N0 = 1;
        cfg.g = 1.0;
        auto ex4 = evolve_exact(cfg);
        auto tb4 = evolve_tebd(cfg, 32, 0.001);
        double dev_t = 0.0;
        for (std::size_t i = 0; i < ex4.num_samples(); ++i)
            for (int j = 0; j < 4; ++j)
                dev_t = std::max(dev_t, std::abs(ex4.photon[i][j] - tb4.photon[i][j]));

        SimulationConfig dcfg = base_cfg();
        dcfg.M = 2;
        dcfg.N0 = 4;
        dcfg.g = 2.0;
        auto ex2 = evolve_exact(dcfg);
        lb_unitary = evolve_master(dcfg);
        double dev_l = 0.0;
        for (std::size_t i = 0; i < ex2.num_samples(); ++i)
            for (int j = 0; j < 2; ++j)
                dev_l = std::max(dev_l, std::abs(ex2.photon[i][j] - lb_unitary.photon[i][j]));
        bool pass = dev_t < 1e-6 && dev_l < 1e-8;
        report(7, "TEBD-exact to 1e-6 and lindblad-exact to 1e-8", pass,
               "TEBD dev=" + num(dev_t) + ", lindblad dev=" + num(dev_l));
    }

    // ---- 9. analytic checks ----
    {
        SimulationConfig cfg = base_cfg();
        cfg.M = 2;
        cfg.N0 = 1;
        cfg.g = 0.0;
        auto sc = sc_evolve(cfg);
        auto ex = evolve_exact(cfg);
        double dev_sc = 0.0, dev_ex = 0.0;
        for (std::size_t i = 0; i < sc.num_samples(); ++i) {
            double z = std::cos(2.0 * sc.times[i]);
            dev_sc = std::max(dev_sc, std::abs(sc.imbalance[i] - z));
            dev_ex = std::max(dev_ex, std::abs(ex.imbalance[i] - z));
        }
        SimulationConfig fcfg = base_cfg();
        fcfg.M = 2;
        fcfg.N0 = 4;
        fcfg.g = 1.0;
        double g2_fock = evolve_exact(fcfg).g2[0][0];
        double dev_g2 = std::abs(g2_fock - (1.0 - 1.0 / 4.0));
        bool pass = dev_sc < 1e-8 && dev_ex < 1e-8 && dev_g2 < 1e-10;
        report(9, "Z(t)=cos(2Jt) at g=0 to 1e-8; Fock g2 = 1-1/N0 at t=0 to 1e-10", pass,
               "semiclassical dev=" + num(dev_sc) + ", exact dev=" + num(dev_ex) +
                   ", g2 dev=" + num(dev_g2));
    }

    // ---- 8 & 10. dissipative signature + positivity/trace suite ----
    {
        SimulationConfig tmpl = base_cfg();
        tmpl.M = 2;
        tmpl.N0 = 7;
        tmpl.kappa = 0.05;
        tmpl.gamma = 0.05;
        tmpl.sample_dt = 0.1;
        // log-spaced up to g/gamma = 200, densified where the transition sits
        std::vector<double> g_grid;
        for (int i = 0; i <= 8; ++i)
            g_grid.push_back(0.1 * std::pow(100.0, i / 9.0)); // 0.1 .. 5.99
        for (double g : {7.0, 8.0, 9.0, 10.0}) g_grid.push_back(g);

        // 10: monitors of every master-equation run made by this suite
        double worst_trace = 0.0, worst_eig = 0.0;
        auto scan = [&](const Trajectory& tr) {
            for (double t : tr.monitors.at("trace"))
                worst_trace = std::max(worst_trace, std::abs(t - 1.0));
            for (double e : tr.monitors.at("min_eig"))
                worst_eig = std::min(worst_eig, e);
        };
        scan(lb_unitary);

        std::vector<double> z_lossy, z_lossless, g2_lossy;
        for (double g : g_grid) {
            SimulationConfig cfg = tmpl;
            cfg.g = g;
            auto lossy = evolve_master(cfg);
            scan(lossy);
            z_lossy.push_back(mean_imbalance(lossy).value);
            std::vector<double> g2_left(lossy.num_samples());
            for (std::size_t i = 0; i < lossy.num_samples(); ++i)
                g2_left[i] = lossy.g2[i][0];
            g2_lossy.push_back(time_average(lossy.times, g2_left, 0.0, 20.0).value);

            cfg.kappa = cfg.gamma = 0.0;
            z_lossless.push_back(mean_imbalance(evolve_exact(cfg)).value);
        }
        // Loss smears the curve: it raises Zbar below the transition and lowers
        // it above, so "localisation pushed to larger g" is read off at the
        // localized level Zbar = 0.9; the 0.5 crossings are reported alongside.
        auto gt9_lossy = locate_transition(g_grid, z_lossy, 0.9);
        auto gt9_lossless = locate_transition(g_grid, z_lossless, 0.9);
        auto gt5_lossy = locate_transition(g_grid, z_lossy, 0.5);
        auto gt5_lossless = locate_transition(g_grid, z_lossless, 0.5);
        double g2_small = g2_lossy.front();
        double g2_large = g2_lossy.back();
        bool shift = gt9_lossless && (!gt9_lossy || *gt9_lossy > *gt9_lossless);
        bool pass8 = g2_small > 1.0 && g2_large >= 0.9 && g2_large <= 1.1 && shift;
        auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : "none"; };
        report(8, "g2bar > 1 at small g, in [0.9,1.1] at g/gamma=200, localisation shifted up",
               pass8,
               "g2bar(g=0.1)=" + num(g2_small) + ", g2bar(g=10)=" + num(g2_large) +
                   "; Zbar=0.9 crossing lossy=" + opt(gt9_lossy) +
                   " lossless=" + opt(gt9_lossless) +
                   "; Zbar=0.5 crossing lossy=" + opt(gt5_lossy) +
                   " lossless=" + opt(gt5_lossless));
        bool pass10 = worst_trace < 1e-8 && worst_eig >= -1e-7;
        report(10, "lindblad trace within 1e-8 and min eigenvalue >= -1e-7", pass10,
               "max |trace-1|=" + num(worst_trace) + ", min eigenvalue=" + num(worst_eig));
    }

    std::printf("%d of 10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
