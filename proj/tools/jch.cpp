// jch — command-line front end: one subcommand per backend plus the sweep
// orchestrator and the cross-backend compare harness. Each run writes CSV
// artifacts and a JSON manifest into the output directory.

#include <chrono>
#include <functional>
#include <future>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "jch/compare.hpp"
#include "jch/io.hpp"
#include "jch/lindblad.hpp"
#include "jch/semiclassical.hpp"
#include "jch/tebd.hpp"

namespace {

using namespace jch;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = "out";
    int jobs = 1;
    bool seedless = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "TOML config file")->required();
    cmd->add_option("--set", args.overrides,
                    "override a config key, e.g. --set physics.g=15");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--jobs", args.jobs, "worker pool size for sweeps")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--seedless", args.seedless,
                  "assert the run involves no stochastic components");
}

void apply_override(toml::Table& t, const std::string& spec) {
    auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("--set expects key=value, got '" + spec + "'");
    std::string key = spec.substr(0, eq);
    auto dot = key.find('.');
    if (dot == std::string::npos)
        throw std::invalid_argument("--set key must be section.name, got '" + key + "'");
    t.set(key.substr(0, dot), key.substr(dot + 1),
          toml::detail::parse_scalar(spec.substr(eq + 1), 0));
}

toml::Table load_table(const CommonArgs& args) {
    toml::Table t = toml::parse_file(args.config_path);
    for (const auto& ov : args.overrides) apply_override(t, ov);
    if (!t.contains("physics.M"))
        throw std::invalid_argument("config is missing required field physics.M");
    return t;
}

// Runs fn(i) for i in [0, n) on a bounded pool; results land at their index,
// so ordering and content are independent of the pool size.
template <typename T>
std::vector<T> parallel_map(int n, int jobs, const std::function<T(int)>& fn) {
    std::vector<T> out(n);
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min(jobs, n); ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) out[i] = fn(i);
        });
    for (auto& th : pool) th.join();
    return out;
}

std::vector<double> sweep_g_grid(const toml::Table& t) {
    if (auto g = t.get<std::vector<double>>("sweep.g_list")) return *g;
    double g0 = t.get_or("sweep.g_min", 0.1);
    double g1 = t.get_or("sweep.g_max", 100.0);
    int np = static_cast<int>(t.get_or<long long>("sweep.g_points", 40));
    std::string scale = t.get_or<std::string>("sweep.g_scale", "log");
    if (np < 1 || g0 <= 0.0 || g1 < g0)
        throw std::invalid_argument("sweep grid requires 0 < g_min <= g_max, g_points >= 1");
    std::vector<double> grid;
    for (int i = 0; i < np; ++i) {
        double f = np == 1 ? 0.0 : static_cast<double>(i) / (np - 1);
        grid.push_back(scale == "log" ? g0 * std::pow(g1 / g0, f)
                                      : g0 + f * (g1 - g0));
    }
    return grid;
}

std::vector<int> int_list(const toml::Table& t, const std::string& key,
                          std::vector<int> fallback) {
    if (auto v = t.get<std::vector<double>>(key)) {
        std::vector<int> out;
        for (double x : *v) out.push_back(static_cast<int>(std::lround(x)));
        return out;
    }
    if (auto v = t.get<long long>(key)) return {static_cast<int>(*v)};
    return fallback;
}

int run_backend(const std::string& sub, const CommonArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    toml::Table table = load_table(args);
    SimulationConfig cfg = config_from_table(table);
    cfg.validate();

    RunManifest man;
    man.subcommand = sub;
    man.config_hash = cfg.hash();
    man.config_canonical = cfg.canonical();
    man.jobs = args.jobs;
    man.seedless = true; // every backend is deterministic; no RNG anywhere

    Trajectory traj;
    if (sub == "semiclassical") traj = sc_evolve(cfg);
    else if (sub == "exact") traj = evolve_exact(cfg);
    else if (sub == "tebd") traj = evolve_tebd(cfg);
    else traj = evolve_master(cfg);

    man.backend = traj.backend;
    man.warnings = traj.warnings;
    std::string base = args.out_dir + "/" + sub;
    write_trajectory_csv(base + "_trajectory.csv", traj);
    write_monitors_csv(base + "_monitors.csv", traj);
    man.outputs = {base + "_trajectory.csv", base + "_monitors.csv"};
    man.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(base + "_manifest.json", man);

    auto zb = mean_imbalance(traj);
    std::cout << sub << ": " << traj.num_samples() << " samples, Zbar="
              << csv_num(zb.value) << ", outputs in " << args.out_dir << "\n";
    return 0;
}

int run_overlaps(const CommonArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    toml::Table table = load_table(args);
    SimulationConfig cfg = config_from_table(table);
    cfg.validate();
    auto analysis = spectral_overlaps(cfg);

    RunManifest man;
    man.subcommand = "overlaps";
    man.backend = "exact-spectral";
    man.config_hash = cfg.hash();
    man.config_canonical = cfg.canonical();
    man.jobs = args.jobs;
    std::string base = args.out_dir + "/overlaps";
    write_overlaps_csv(base + ".csv", analysis, cfg.hash());
    man.outputs = {base + ".csv"};
    man.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(base + "_manifest.json", man);

    std::cout << "overlaps: " << analysis.modes.size()
              << " modes, overlap sum " << csv_num(analysis.overlap_sum) << "\n";
    return 0;
}

int run_sweep(const CommonArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    toml::Table table = load_table(args);
    SimulationConfig tmpl = config_from_table(table);
    tmpl.validate();

    std::string mode = table.get_or<std::string>("sweep.mode", "semiclassical");
    auto g_grid = sweep_g_grid(table);
    auto m_grid = int_list(table, "sweep.m_list", {tmpl.M});
    auto n0_grid = int_list(table, "sweep.n0_list", {tmpl.N0});

    RunManifest man;
    man.subcommand = "sweep";
    man.backend = "sweep-" + mode;
    man.config_hash = tmpl.hash();
    man.config_canonical = tmpl.canonical();
    man.jobs = args.jobs;
    std::string base = args.out_dir + "/sweep_" + mode;

    if (mode == "semiclassical") {
        std::vector<std::pair<int, double>> pts;
        for (int m : m_grid)
            for (double g : g_grid) pts.emplace_back(m, g);
        auto rows = parallel_map<SweepRow>(
            static_cast<int>(pts.size()), args.jobs, [&](int i) {
                return sc_sweep(tmpl, {pts[i].second}, {pts[i].first}).front();
            });
        write_sweep_csv(base + ".csv", rows, tmpl.hash());
    } else if (mode == "quantum") {
        std::vector<std::tuple<int, int, double>> pts;
        for (int m : m_grid)
            for (int n0 : n0_grid)
                for (double g : g_grid) pts.emplace_back(m, n0, g);
        auto rows = parallel_map<ZbarRow>(
            static_cast<int>(pts.size()), args.jobs, [&](int i) {
                auto [m, n0, g] = pts[i];
                return zbar_surface(tmpl, {g}, {m}, {n0}).front();
            });
        write_zbar_csv(base + ".csv", rows, tmpl.hash());
    } else if (mode == "dimer") {
        bool loss = table.get_or("sweep.loss", false);
        std::vector<std::pair<int, double>> pts;
        for (int n0 : n0_grid)
            for (double g : g_grid) pts.emplace_back(n0, g);
        auto rows = parallel_map<ChartRow>(
            static_cast<int>(pts.size()), args.jobs, [&](int i) {
                return transition_chart(tmpl, {pts[i].second}, {pts[i].first}, loss).front();
            });
        write_chart_csv(base + ".csv", rows, tmpl.hash());
    } else {
        throw std::invalid_argument(
            "sweep.mode must be semiclassical, quantum or dimer; got '" + mode + "'");
    }

    man.outputs = {base + ".csv"};
    man.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(base + "_manifest.json", man);
    std::cout << "sweep (" << mode << "): " << g_grid.size() << " g points, outputs in "
              << args.out_dir << "\n";
    return 0;
}

int run_compare(const std::string& path_a, const std::string& path_b, double tol) {
    auto a = read_trajectory_csv(path_a);
    auto b = read_trajectory_csv(path_b);
    auto rep = compare_trajectories(a, b, tol);
    for (const auto& [name, dev] : rep.observables)
        std::cout << name << ": max_dev=" << csv_num(dev.max_dev)
                  << " rms_dev=" << csv_num(dev.rms_dev)
                  << " samples=" << dev.samples << "\n";
    std::cout << (rep.pass ? "PASS" : "FAIL") << " (max " << csv_num(rep.max_dev)
              << " vs tolerance " << csv_num(rep.tolerance) << ")\n";
    return rep.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jaynes-Cummings-Hubbard array simulation toolkit"};
    app.require_subcommand(1);

    std::vector<std::string> backends = {"semiclassical", "exact", "tebd", "lindblad"};
    std::map<std::string, CommonArgs> common;
    for (const auto& name : backends)
        add_common(app.add_subcommand(name, "evolve with the " + name + " backend"),
                   common[name]);
    add_common(app.add_subcommand("overlaps", "eigenmode overlap/current analysis"),
               common["overlaps"]);
    add_common(app.add_subcommand("sweep", "Zbar / g2bar grids over (g, M, N0)"),
               common["sweep"]);

    auto* cmp = app.add_subcommand("compare", "compare two trajectory CSVs");
    std::string path_a, path_b;
    double tol = 1e-8;
    cmp->add_option("a", path_a, "first trajectory CSV")->required();
    cmp->add_option("b", path_b, "second trajectory CSV")->required();
    cmp->add_option("--tol", tol, "pass/fail tolerance on the max deviation");

    CLI11_PARSE(app, argc, argv);
    std::string sub = app.get_subcommands().front()->get_name();
    try {
        if (sub == "compare") return run_compare(path_a, path_b, tol);
        if (sub == "overlaps") return run_overlaps(common[sub]);
        if (sub == "sweep") return run_sweep(common[sub]);
        return run_backend(sub, common[sub]);
    } catch (const std::exception& e) {
        std::cerr << "{\"error\": \"" << e.what() << "\"}\n";
        return 1;
    }
}
