// config.hpp — Run parameters for the resonator-array simulations.

#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

#include "jch/toml.hpp"

namespace jch {

enum class Frame { rotating, lab };

inline std::string to_string(Frame f) {
    return f == Frame::rotating ? "rotating" : "lab";
}

inline Frame frame_from_string(const std::string& s) {
    if (s == "rotating") return Frame::rotating;
    if (s == "lab") return Frame::lab;
    throw std::invalid_argument("frame must be 'rotating' or 'lab', got '" + s + "'");
}

// All energies and rates are in units of the tunnelling rate J; all times in
// units of 1/J. J itself is kept as an explicit field so lab-frame runs can
// scale it, but the shipped configs use J = 1.
struct SimulationConfig {
    // physics
    int M = 2;               // number of resonators, even
    double omega_r = 0.0;    // resonator frequency (lab frame only)
    double omega_a = 0.0;    // TLS frequency (lab frame only)
    double g = 1.0;          // Jaynes-Cummings coupling
    double J = 1.0;          // photon tunnelling rate
    int N0 = 1;              // initial photons per pumped resonator
    double kappa = 0.0;      // photon loss rate
    double gamma = 0.0;      // TLS decay rate

    // numerics
    int n_max = -1;          // photon cutoff per resonator; -1 = auto
    double t_max = 20.0;
    double sample_dt = 0.01;
    Frame frame = Frame::rotating;
    int chi = 100;           // MPS bond-dimension cap
    double trotter_dt = 0.01;
    double rel_tol = 1e-9;   // ODE integrator tolerances
    double abs_tol = 1e-11;
    int krylov_max = 30;
    int dim_budget = 200000; // refuse exact evolution above this dimension
    double discard_alarm = 1e-6; // per-step discarded-weight warning level

    int total_excitation() const { return N0 * M / 2; }

    // Fig. 3 convention: keep min(N0*M/2, 7) photons per resonator unless the
    // user pins the cutoff explicitly.
    int effective_n_max() const {
        if (n_max > 0) return n_max;
        return std::max(1, std::min(total_excitation(), 7));
    }

    void validate() const {
        if (M < 2 || M % 2 != 0)
            throw std::invalid_argument("M must be even and >= 2, got " + std::to_string(M));
        if (J <= 0.0)
            throw std::invalid_argument("J must be > 0");
        if (g < 0.0)
            throw std::invalid_argument("g must be >= 0");
        if (N0 < 1)
            throw std::invalid_argument("N0 must be >= 1");
        if (n_max > 0 && (n_max < N0 || n_max < 1))
            throw std::invalid_argument("n_max must be >= max(N0, 1)");
        if (t_max <= 0.0)
            throw std::invalid_argument("t_max must be > 0");
        if (sample_dt <= 0.0 || sample_dt > t_max)
            throw std::invalid_argument("sample_dt must be in (0, t_max]");
        if (kappa < 0.0 || gamma < 0.0)
            throw std::invalid_argument("loss rates must be >= 0");
        if (chi < 1)
            throw std::invalid_argument("chi must be >= 1");
        if (trotter_dt <= 0.0 || trotter_dt > 0.05 / J)
            throw std::invalid_argument("trotter_dt must be in (0, 0.05/J]");
    }

    // Canonical key=value dump with defaults materialized. Used for output
    // headers, the run manifest, and the config hash.
    std::string canonical() const {
        std::ostringstream os;
        os.precision(17);
        os << "M=" << M
           << ";omega_r=" << omega_r
           << ";omega_a=" << omega_a
           << ";g=" << g
           << ";J=" << J
           << ";N0=" << N0
           << ";kappa=" << kappa
           << ";gamma=" << gamma
           << ";n_max=" << effective_n_max()
           << ";t_max=" << t_max
           << ";sample_dt=" << sample_dt
           << ";frame=" << to_string(frame)
           << ";chi=" << chi
           << ";trotter_dt=" << trotter_dt
           << ";rel_tol=" << rel_tol
           << ";abs_tol=" << abs_tol
           << ";krylov_max=" << krylov_max
           << ";dim_budget=" << dim_budget
           << ";discard_alarm=" << discard_alarm;
        return os.str();
    }

    // FNV-1a over the canonical form; stable across runs and platforms.
    std::string hash() const {
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char c : canonical()) {
            h ^= c;
            h *= 1099511628211ull;
        }
        std::ostringstream os;
        os << std::hex << h;
        return os.str();
    }
};

inline void apply_key(SimulationConfig& cfg, const std::string& key, const toml::Table& t) {
    auto want_int = [&](int& field, const std::string& k) {
        if (auto v = t.get<long long>(k)) field = static_cast<int>(*v);
    };
    auto want_real = [&](double& field, const std::string& k) {
        if (auto v = t.get<double>(k)) field = *v;
    };
    if (key == "physics.M") want_int(cfg.M, key);
    else if (key == "physics.omega_r") want_real(cfg.omega_r, key);
    else if (key == "physics.omega_a") want_real(cfg.omega_a, key);
    else if (key == "physics.g") want_real(cfg.g, key);
    else if (key == "physics.J") want_real(cfg.J, key);
    else if (key == "physics.N0") want_int(cfg.N0, key);
    else if (key == "physics.kappa") want_real(cfg.kappa, key);
    else if (key == "physics.gamma") want_real(cfg.gamma, key);
    else if (key == "numerics.n_max") want_int(cfg.n_max, key);
    else if (key == "numerics.t_max") want_real(cfg.t_max, key);
    else if (key == "numerics.sample_dt") want_real(cfg.sample_dt, key);
    else if (key == "numerics.frame") {
        if (auto v = t.get<std::string>(key)) cfg.frame = frame_from_string(*v);
    }
    else if (key == "numerics.chi") want_int(cfg.chi, key);
    else if (key == "numerics.trotter_dt") want_real(cfg.trotter_dt, key);
    else if (key == "numerics.rel_tol") want_real(cfg.rel_tol, key);
    else if (key == "numerics.abs_tol") want_real(cfg.abs_tol, key);
    else if (key == "numerics.krylov_max") want_int(cfg.krylov_max, key);
    else if (key == "numerics.dim_budget") want_int(cfg.dim_budget, key);
    else if (key == "numerics.discard_alarm") want_real(cfg.discard_alarm, key);
}

// Builds a config from a parsed table; unknown keys outside the recognized
// sections are left for the caller (e.g. [sweep], [output]).
inline SimulationConfig config_from_table(const toml::Table& t) {
    SimulationConfig cfg;
    for (const auto& [key, _] : t.items())
        apply_key(cfg, key, t);
    return cfg;
}

inline SimulationConfig load_config(const std::string& path) {
    return config_from_table(toml::parse_file(path));
}

} // namespace jch
