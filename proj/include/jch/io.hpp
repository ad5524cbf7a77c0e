// io.hpp — Deterministic CSV writers for trajectories and sweep tables, a CSV
// trajectory reader for the compare harness, and the JSON run manifest.
//
// Every CSV starts with a comment line carrying the config hash and backend so
// downstream artifacts can be traced to the exact run that produced them.
// Dimensionful columns are suffixed _perJ (rates, couplings); times are the
// dimensionless product tJ.

#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "jch/config.hpp"
#include "jch/exact.hpp"
#include "jch/lindblad.hpp"
#include "jch/observables.hpp"
#include "jch/semiclassical.hpp"
#include "jch/tebd.hpp"

namespace jch {

// Shortest round-trippable decimal form, identical across runs.
inline std::string csv_num(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    double back;
    std::sscanf(buf, "%lg", &back);
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[32];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, x);
        std::sscanf(shorter, "%lg", &back);
        if (back == x) return shorter;
    }
    return buf;
}

inline std::ofstream open_output(const std::string& path) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    return f;
}

// Long-format trajectory table: one row per (sample, site).
inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    auto f = open_output(path);
    f << "# config_hash=" << traj.config_hash << " backend=" << traj.backend << "\n";
    f << "tJ,site,n,tls,g2,g2_defined,Z\n";
    const int M = traj.num_samples() ? static_cast<int>(traj.photon[0].size()) : 0;
    for (std::size_t i = 0; i < traj.num_samples(); ++i)
        for (int j = 0; j < M; ++j) {
            double g2 = traj.g2.empty() ? kUndefined : traj.g2[i][j];
            f << csv_num(traj.times[i]) << ',' << (j + 1) << ','
              << csv_num(traj.photon[i][j]) << ','
              << csv_num(traj.tls.empty() ? kUndefined : traj.tls[i][j]) << ','
              << csv_num(g2) << ',' << (std::isnan(g2) ? 0 : 1) << ','
              << csv_num(traj.imbalance[i]) << "\n";
        }
}

// Wide-format conserved-quantity / diagnostic monitors, one column each.
inline void write_monitors_csv(const std::string& path, const Trajectory& traj) {
    auto f = open_output(path);
    f << "# config_hash=" << traj.config_hash << " backend=" << traj.backend << "\n";
    f << "tJ";
    for (const auto& [name, _] : traj.monitors) f << ',' << name;
    f << "\n";
    for (std::size_t i = 0; i < traj.num_samples(); ++i) {
        f << csv_num(traj.times[i]);
        for (const auto& [_, col] : traj.monitors)
            f << ',' << csv_num(i < col.size() ? col[i] : kUndefined);
        f << "\n";
    }
}

inline void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows,
                            const std::string& config_hash) {
    auto f = open_output(path);
    f << "# config_hash=" << config_hash << " backend=semiclassical\n";
    f << "M,N0,g_perJ,Zbar,ok,message\n";
    for (const auto& r : rows)
        f << r.M << ',' << r.N0 << ',' << csv_num(r.g) << ',' << csv_num(r.zbar)
          << ',' << (r.ok ? 1 : 0) << ',' << '"' << r.message << '"' << "\n";
}

inline void write_zbar_csv(const std::string& path, const std::vector<ZbarRow>& rows,
                           const std::string& config_hash) {
    auto f = open_output(path);
    f << "# config_hash=" << config_hash << " backend=quantum\n";
    f << "M,N0,g_perJ,Zbar,backend,ok,message\n";
    for (const auto& r : rows)
        f << r.M << ',' << r.N0 << ',' << csv_num(r.g) << ',' << csv_num(r.zbar)
          << ',' << r.backend << ',' << (r.ok ? 1 : 0) << ','
          << '"' << r.message << '"' << "\n";
}

inline void write_chart_csv(const std::string& path, const std::vector<ChartRow>& rows,
                            const std::string& config_hash) {
    auto f = open_output(path);
    f << "# config_hash=" << config_hash << " backend=dimer-chart\n";
    f << "N0,g_perJ,loss,Zbar,g2bar,undefined_fraction,backend,ok,message\n";
    for (const auto& r : rows)
        f << r.N0 << ',' << csv_num(r.g) << ',' << (r.loss ? 1 : 0) << ','
          << csv_num(r.zbar) << ',' << csv_num(r.g2bar) << ','
          << csv_num(r.undefined_fraction) << ',' << r.backend << ','
          << (r.ok ? 1 : 0) << ',' << '"' << r.message << '"' << "\n";
}

inline void write_overlaps_csv(const std::string& path, const ModeAnalysis& analysis,
                               const std::string& config_hash) {
    auto f = open_output(path);
    f << "# config_hash=" << config_hash << " backend=exact-spectral\n";
    f << "mode,energy_perJ,overlap,current,label\n";
    for (std::size_t k = 0; k < analysis.modes.size(); ++k) {
        const auto& m = analysis.modes[k];
        f << k << ',' << csv_num(m.energy) << ',' << csv_num(m.overlap) << ','
          << csv_num(m.current) << ',' << m.label << "\n";
    }
}

// Reads a long-format trajectory written by write_trajectory_csv.
inline Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open trajectory file: " + path);
    Trajectory traj;
    std::string line;
    if (std::getline(f, line) && line.rfind("# config_hash=", 0) == 0) {
        std::istringstream hs(line.substr(2));
        std::string tok;
        while (hs >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            if (tok.substr(0, eq) == "config_hash") traj.config_hash = tok.substr(eq + 1);
            if (tok.substr(0, eq) == "backend") traj.backend = tok.substr(eq + 1);
        }
        std::getline(f, line); // header row
    }
    double last_t = 0.0;
    bool first = true;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() < 7)
            throw std::runtime_error("malformed trajectory row in " + path);
        auto num = [](const std::string& s) {
            return s == "nan" ? kUndefined : std::stod(s);
        };
        double t = num(cells[0]);
        if (first || t != last_t) {
            traj.times.push_back(t);
            traj.photon.emplace_back();
            traj.tls.emplace_back();
            traj.g2.emplace_back();
            traj.imbalance.push_back(num(cells[6]));
            last_t = t;
            first = false;
        }
        traj.photon.back().push_back(num(cells[2]));
        traj.tls.back().push_back(num(cells[3]));
        traj.g2.back().push_back(num(cells[4]));
    }
    if (traj.times.empty())
        throw std::runtime_error("trajectory file has no samples: " + path);
    return traj;
}

struct RunManifest {
    std::string subcommand;
    std::string backend;
    std::string config_hash;
    std::string config_canonical;
    double duration_seconds = 0.0;
    int jobs = 1;
    bool seedless = true;
    std::vector<std::string> outputs;
    std::vector<std::string> warnings;
};

inline constexpr const char* kCodeVersion = "0.1.0";

inline void write_manifest(const std::string& path, const RunManifest& m) {
    nlohmann::json j;
    j["code_version"] = kCodeVersion;
    j["subcommand"] = m.subcommand;
    j["backend"] = m.backend;
    j["config_hash"] = m.config_hash;
    nlohmann::json cfg = nlohmann::json::object();
    std::istringstream cs(m.config_canonical);
    std::string pair;
    while (std::getline(cs, pair, ';')) {
        auto eq = pair.find('=');
        if (eq != std::string::npos) cfg[pair.substr(0, eq)] = pair.substr(eq + 1);
    }
    j["config"] = cfg;
    j["duration_seconds"] = m.duration_seconds;
    j["jobs"] = m.jobs;
    j["seedless"] = m.seedless;
    j["outputs"] = m.outputs;
    j["warnings"] = m.warnings;
    auto f = open_output(path);
    f << j.dump(2) << "\n";
}

} // namespace jch
