// semiclassical.hpp — Mean-field dynamics of the array: the factorized
// equations of motion for (⟨a_j⟩, ⟨σ−_j⟩, ⟨σz_j⟩), their integration, and the
// Z̄(g, M) transition sweep.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "jch/config.hpp"
#include "jch/observables.hpp"

namespace jch {

struct SCState {
    std::vector<std::complex<double>> alpha; // ⟨a_j⟩
    std::vector<std::complex<double>> m;     // ⟨σ−_j⟩
    std::vector<double> z;                   // ⟨σz_j⟩
};

namespace sc_detail {

using cvec = std::vector<std::complex<double>>;

// flat layout: [alpha_0..alpha_{M-1}, m_0..m_{M-1}, z_0..z_{M-1}]
inline cvec pack(const SCState& s) {
    const std::size_t M = s.alpha.size();
    cvec y(3 * M);
    for (std::size_t j = 0; j < M; ++j) {
        y[j] = s.alpha[j];
        y[M + j] = s.m[j];
        y[2 * M + j] = s.z[j];
    }
    return y;
}

inline SCState unpack(const cvec& y) {
    const std::size_t M = y.size() / 3;
    SCState s;
    s.alpha.assign(y.begin(), y.begin() + M);
    s.m.assign(y.begin() + M, y.begin() + 2 * M);
    s.z.resize(M);
    for (std::size_t j = 0; j < M; ++j) s.z[j] = y[2 * M + j].real();
    return s;
}

} // namespace sc_detail

// Photons on the left half at amplitude √N0, all TLSs in the ground state.
inline SCState sc_initial_state(const SimulationConfig& cfg) {
    if (cfg.M % 2 != 0 || cfg.M < 2)
        throw std::invalid_argument("sc_initial_state: M must be even and >= 2");
    SCState s;
    s.alpha.assign(cfg.M, 0.0);
    s.m.assign(cfg.M, 0.0);
    s.z.assign(cfg.M, -1.0);
    for (int j = 0; j < cfg.M / 2; ++j)
        s.alpha[j] = std::sqrt(static_cast<double>(cfg.N0));
    return s;
}

//   α̇_j = −iω_r α_j − i g m_j + iJ(α_{j−1} + α_{j+1})   (open boundaries)
//   ṁ_j = −2iω_a m_j + i g α_j z_j
//   ż_j = −2ig(α_j m_j* − α_j* m_j) = 4g Im(α_j m_j*)
// The ω terms vanish in the rotating frame. The −2iω_a prefactor in the ṁ
// equation is kept verbatim for lab-frame runs; see the README note on the
// lab-frame TLS phase convention.
inline SCState sc_rhs(const SCState& s, const SimulationConfig& cfg) {
    const int M = static_cast<int>(s.alpha.size());
    const std::complex<double> I(0.0, 1.0);
    const double wr = cfg.frame == Frame::rotating ? 0.0 : cfg.omega_r;
    const double wa = cfg.frame == Frame::rotating ? 0.0 : cfg.omega_a;
    SCState d;
    d.alpha.resize(M);
    d.m.resize(M);
    d.z.resize(M);
    for (int j = 0; j < M; ++j) {
        std::complex<double> hop = 0.0;
        if (j > 0) hop += s.alpha[j - 1];
        if (j + 1 < M) hop += s.alpha[j + 1];
        d.alpha[j] = -I * wr * s.alpha[j] - I * cfg.g * s.m[j] + I * cfg.J * hop;
        d.m[j] = -2.0 * I * wa * s.m[j] + I * cfg.g * s.alpha[j] * s.z[j];
        d.z[j] = 4.0 * cfg.g * std::imag(s.alpha[j] * std::conj(s.m[j]));
    }
    return d;
}

// Mean-field total excitation Σ_j |α_j|² + (z_j+1)/2; conserved in the
// rotating frame.
inline double sc_total_excitation(const SCState& s) {
    double n = 0.0;
    for (std::size_t j = 0; j < s.alpha.size(); ++j)
        n += std::norm(s.alpha[j]) + 0.5 * (s.z[j] + 1.0);
    return n;
}

// Evolution from an arbitrary mean-field state; sc_evolve below supplies the
// standard half-filled initial conditions.
inline Trajectory sc_evolve_from(const SimulationConfig& cfg, const SCState& initial) {
    cfg.validate();
    if (static_cast<int>(initial.alpha.size()) != cfg.M)
        throw std::invalid_argument("sc_evolve_from: state size != M");
    namespace ode = boost::numeric::odeint;
    using sc_detail::cvec;

    const int M = cfg.M;
    auto rhs = [&cfg, M](const cvec& y, cvec& dy, double /*t*/) {
        SCState d = sc_rhs(sc_detail::unpack(y), cfg);
        dy = sc_detail::pack(d);
    };

    Trajectory traj;
    traj.backend = "semiclassical";
    traj.config_hash = cfg.hash();
    auto& nsc = traj.monitors["N_sc"];
    auto& bloch = traj.monitors["bloch_defect"];

    auto record = [&](const cvec& y, double t) {
        SCState s = sc_detail::unpack(y);
        traj.times.push_back(t);
        std::vector<double> n(M), tls(M);
        double bdef = 0.0;
        for (int j = 0; j < M; ++j) {
            n[j] = std::norm(s.alpha[j]);
            tls[j] = 0.5 * (s.z[j] + 1.0);
            bdef = std::max(bdef, std::abs(s.z[j] * s.z[j] + 4.0 * std::norm(s.m[j]) - 1.0));
        }
        traj.imbalance.push_back(imbalance(n, M));
        traj.photon.push_back(std::move(n));
        traj.tls.push_back(std::move(tls));
        nsc.push_back(sc_total_excitation(s));
        bloch.push_back(bdef);
    };

    cvec y = sc_detail::pack(initial);
    auto stepper = ode::make_dense_output(cfg.abs_tol, cfg.rel_tol,
                                          ode::runge_kutta_dopri5<cvec>());
    stepper.initialize(y, 0.0, cfg.sample_dt);
    record(y, 0.0);
    const long steps = std::lround(cfg.t_max / cfg.sample_dt);
    double t = 0.0;
    try {
        for (long i = 1; i <= steps; ++i) {
            t = i * cfg.sample_dt;
            while (stepper.current_time() < t)
                stepper.do_step(rhs);
            cvec yi(y.size());
            stepper.calc_state(t, yi);
            record(yi, t);
        }
    } catch (const std::exception& e) {
        throw std::runtime_error("sc_evolve: integrator failure near t=" +
                                 std::to_string(t) + ": " + e.what());
    }
    return traj;
}

inline Trajectory sc_evolve(const SimulationConfig& cfg) {
    return sc_evolve_from(cfg, sc_initial_state(cfg));
}

struct SweepRow {
    int M = 0;
    int N0 = 0;
    double g = 0.0;
    double zbar = kUndefined;
    bool ok = false;
    std::string message;
};

// One mean-field evolution per (M, g) grid point; Z̄ over tJ in [0, 20].
// Failed points are flagged and do not abort the sweep.
inline std::vector<SweepRow> sc_sweep(const SimulationConfig& tmpl,
                                      const std::vector<double>& g_grid,
                                      const std::vector<int>& m_grid) {
    if (g_grid.empty() || m_grid.empty())
        throw std::invalid_argument("sc_sweep: empty grid");
    std::vector<SweepRow> rows;
    std::vector<int> ms = m_grid;
    std::sort(ms.begin(), ms.end());
    std::vector<double> gs = g_grid;
    std::sort(gs.begin(), gs.end());
    for (int m : ms) {
        for (double g : gs) {
            SweepRow row;
            row.M = m;
            row.N0 = tmpl.N0;
            row.g = g;
            try {
                SimulationConfig cfg = tmpl;
                cfg.M = m;
                cfg.g = g;
                Trajectory traj = sc_evolve(cfg);
                row.zbar = mean_imbalance(traj).value;
                row.ok = true;
            } catch (const std::exception& e) {
                row.message = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

// First crossing of Z̄ above `level` on an ascending g grid, linearly
// interpolated between the bracketing grid points.
inline std::optional<double> locate_transition(const std::vector<double>& g,
                                               const std::vector<double>& zbar,
                                               double level = 0.5) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!is_defined(zbar[i]) || zbar[i] <= level) continue;
        if (i == 0) return g[0];
        double z0 = zbar[i - 1], z1 = zbar[i];
        double f = (level - z0) / (z1 - z0);
        return g[i - 1] + f * (g[i] - g[i - 1]);
    }
    return std::nullopt;
}

} // namespace jch
