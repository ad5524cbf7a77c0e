// lindblad.hpp — Dissipative dimer dynamics: the master equation with photon
// loss on â_i (rate kappa) and TLS decay on σ̂−_i (rate gamma), integrated on
// the full truncated product space (loss breaks number conservation), plus the
// (Z̄, ḡ⁽²⁾) transition chart.
//
// Note: the source equation attaches the rates the other way round from its
// surrounding prose; here kappa is always photon loss and gamma always TLS
// decay, and both rates are emitted in run metadata.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "jch/config.hpp"
#include "jch/exact.hpp"
#include "jch/observables.hpp"

namespace jch {

namespace lb_detail {

using SpMat = Eigen::SparseMatrix<cd>;

// Local operators on the composite resonator+TLS space, index p = tls*(n_max+1)+n.
inline SpMat local_annihilate(int n_max) {
    const int nph = n_max + 1, d = 2 * nph;
    std::vector<Eigen::Triplet<cd>> trip;
    for (int tls = 0; tls <= 1; ++tls)
        for (int n = 1; n <= n_max; ++n)
            trip.emplace_back(tls * nph + n - 1, tls * nph + n, std::sqrt(double(n)));
    SpMat a(d, d);
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

inline SpMat local_lower_tls(int n_max) {
    const int nph = n_max + 1, d = 2 * nph;
    std::vector<Eigen::Triplet<cd>> trip;
    for (int n = 0; n <= n_max; ++n)
        trip.emplace_back(n, nph + n, 1.0);
    SpMat s(d, d);
    s.setFromTriplets(trip.begin(), trip.end());
    return s;
}

// Embed a local operator at the given site of the dimer (site 0 is the most
// significant factor: product index i = p0*d + p1).
inline SpMat embed(const SpMat& op, int site, int d) {
    SpMat id(d, d);
    id.setIdentity();
    SpMat out = site == 0 ? SpMat(Eigen::kroneckerProduct(op, id))
                          : SpMat(Eigen::kroneckerProduct(id, op));
    out.makeCompressed();
    return out;
}

// Diagonal weights of a local diagonal observable lifted to the product space.
inline Eigen::VectorXd embed_diagonal(const Eigen::VectorXd& w, int site, int d) {
    Eigen::VectorXd out(d * d);
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q)
            out(p * d + q) = site == 0 ? w(p) : w(q);
    return out;
}

} // namespace lb_detail

// Normalized equal-time second-order correlation ⟨a†a†aa⟩/⟨a†a⟩² at one site
// (0-based) of the dimer density matrix; undefined sentinel below ε_n = 1e-6.
inline double g2_local(const Eigen::MatrixXcd& rho, int site, int n_max) {
    const int nph = n_max + 1, d = 2 * nph;
    if (rho.rows() != d * d || rho.cols() != d * d)
        throw std::invalid_argument("g2_local: density matrix size != (2(n_max+1))^2");
    if (site < 0 || site > 1)
        throw std::invalid_argument("g2_local: site must be 0 or 1");
    Eigen::VectorXd n_loc(d), nn1_loc(d);
    for (int p = 0; p < d; ++p) {
        int n = p % nph;
        n_loc(p) = n;
        nn1_loc(p) = double(n) * (n - 1);
    }
    Eigen::VectorXd wn = lb_detail::embed_diagonal(n_loc, site, d);
    Eigen::VectorXd wk = lb_detail::embed_diagonal(nn1_loc, site, d);
    double n_mean = 0.0, nn1 = 0.0;
    for (int i = 0; i < d * d; ++i) {
        double p = rho(i, i).real();
        n_mean += wn(i) * p;
        nn1 += wk(i) * p;
    }
    if (n_mean < 1e-6) return kUndefined;
    return nn1 / (n_mean * n_mean);
}

inline Trajectory evolve_master(const SimulationConfig& cfg) {
    cfg.validate();
    if (cfg.M != 2)
        throw std::invalid_argument("evolve_master: dissipative evolution covers M = 2 only");
    const int n_max = cfg.effective_n_max();
    if (cfg.N0 > n_max)
        throw std::invalid_argument("evolve_master: N0 exceeds the photon cutoff n_max");
    const int nph = n_max + 1, d = 2 * nph, D = d * d;
    if (static_cast<long>(D) * D > cfg.dim_budget)
        throw CapacityError("evolve_master: density matrix of dimension " +
                            std::to_string(D) + "^2 exceeds dim_budget " +
                            std::to_string(cfg.dim_budget));
    const double wr = cfg.frame == Frame::rotating ? 0.0 : cfg.omega_r;
    const double wa = cfg.frame == Frame::rotating ? 0.0 : cfg.omega_a;

    using lb_detail::SpMat;
    SpMat a_loc = lb_detail::local_annihilate(n_max);
    SpMat s_loc = lb_detail::local_lower_tls(n_max);

    std::vector<SpMat> a_site, s_site;
    for (int j = 0; j < 2; ++j) {
        a_site.push_back(lb_detail::embed(a_loc, j, d));
        s_site.push_back(lb_detail::embed(s_loc, j, d));
    }

    SpMat H(D, D);
    for (int j = 0; j < 2; ++j) {
        H += wr * SpMat(a_site[j].adjoint() * a_site[j]) +
             wa * SpMat(s_site[j].adjoint() * s_site[j]) +
             cfg.g * SpMat(SpMat(a_site[j].adjoint() * s_site[j]) +
                           SpMat(s_site[j].adjoint() * a_site[j]));
    }
    H -= cfg.J * SpMat(SpMat(a_site[0].adjoint() * a_site[1]) +
                       SpMat(a_site[1].adjoint() * a_site[0]));

    // effective drift A = -iH - (κ Σ a†a + γ Σ σ+σ−)/2, so that
    // ρ̇ = Aρ + ρA† + κ Σ a ρ a† + γ Σ σ− ρ σ+.
    SpMat A = SpMat(cd(0.0, -1.0) * H);
    for (int j = 0; j < 2; ++j)
        A -= 0.5 * (cfg.kappa * SpMat(a_site[j].adjoint() * a_site[j]) +
                    cfg.gamma * SpMat(s_site[j].adjoint() * s_site[j]));
    A.makeCompressed();

    using cvec = std::vector<cd>;
    auto rhs = [&](const cvec& y, cvec& dy, double /*t*/) {
        Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), D, D);
        dy.resize(y.size());
        Eigen::Map<Eigen::MatrixXcd> out(dy.data(), D, D);
        out.noalias() = A * rho;
        out.noalias() += rho * A.adjoint();
        for (int j = 0; j < 2; ++j) {
            if (cfg.kappa > 0.0)
                out.noalias() += cfg.kappa * (a_site[j] * rho * a_site[j].adjoint());
            if (cfg.gamma > 0.0)
                out.noalias() += cfg.gamma * (s_site[j] * rho * s_site[j].adjoint());
        }
    };

    // diagonal observable weights
    Eigen::VectorXd n_loc(d), tls_loc(d);
    for (int p = 0; p < d; ++p) {
        n_loc(p) = p % nph;
        tls_loc(p) = p / nph;
    }
    std::vector<Eigen::VectorXd> wn, wt;
    for (int j = 0; j < 2; ++j) {
        wn.push_back(lb_detail::embed_diagonal(n_loc, j, d));
        wt.push_back(lb_detail::embed_diagonal(tls_loc, j, d));
    }

    Trajectory traj;
    traj.backend = "lindblad";
    traj.config_hash = cfg.hash();

    auto record = [&](const cvec& y, double t) {
        Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), D, D);
        std::vector<double> n(2), tls(2), g2(2);
        for (int j = 0; j < 2; ++j) {
            double nj = 0.0, tj = 0.0, kj = 0.0;
            for (int i = 0; i < D; ++i) {
                double p = rho(i, i).real();
                nj += wn[j](i) * p;
                tj += wt[j](i) * p;
                kj += wn[j](i) * (wn[j](i) - 1.0) * p;
            }
            n[j] = nj;
            tls[j] = tj;
            g2[j] = nj > 1e-6 ? kj / (nj * nj) : kUndefined;
        }
        double trace = rho.trace().real();
        double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
        double min_eig = es.eigenvalues().minCoeff();
        if (min_eig < -1e-5)
            throw std::runtime_error(
                "evolve_master: positivity violation at t=" + std::to_string(t) +
                " (min eigenvalue " + std::to_string(min_eig) + ")");
        traj.times.push_back(t);
        traj.imbalance.push_back(imbalance(n, 2));
        traj.monitors["N_total"].push_back(n[0] + n[1] + tls[0] + tls[1]);
        traj.monitors["trace"].push_back(trace);
        traj.monitors["herm_defect"].push_back(herm);
        traj.monitors["min_eig"].push_back(min_eig);
        traj.photon.push_back(std::move(n));
        traj.tls.push_back(std::move(tls));
        traj.g2.push_back(std::move(g2));
    };

    // pure initial state: N0 photons in the left resonator, TLSs down
    cvec y(static_cast<std::size_t>(D) * D, cd(0.0, 0.0));
    const int i0 = cfg.N0 * d + 0;
    y[static_cast<std::size_t>(i0) * D + i0] = 1.0;

    namespace ode = boost::numeric::odeint;
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
    } catch (const std::runtime_error&) {
        throw;
    } catch (const std::exception& e) {
        throw std::runtime_error("evolve_master: integrator failure near t=" +
                                 std::to_string(t) + ": " + e.what());
    }
    return traj;
}

struct ChartRow {
    int N0 = 0;
    double g = 0.0;
    bool loss = false;
    double zbar = kUndefined;
    double g2bar = kUndefined;
    double undefined_fraction = 0.0;
    std::string backend;
    bool ok = false;
    std::string message;
};

// (Z̄, ḡ⁽²⁾) per grid point on the dimer; ḡ⁽²⁾ is the time average of g⁽²⁾ at
// the initially-populated (left) site over the defined samples only. Lossless
// points use the closed-system solver; lossy ones the master equation.
inline std::vector<ChartRow> transition_chart(const SimulationConfig& tmpl,
                                              const std::vector<double>& g_grid,
                                              const std::vector<int>& n0_grid,
                                              bool loss) {
    if (g_grid.empty() || n0_grid.empty())
        throw std::invalid_argument("transition_chart: empty grid");
    std::vector<ChartRow> rows;
    for (int n0 : n0_grid)
        for (double g : g_grid) {
            ChartRow row;
            row.N0 = n0;
            row.g = g;
            row.loss = loss;
            try {
                SimulationConfig cfg = tmpl;
                cfg.M = 2;
                cfg.N0 = n0;
                cfg.g = g;
                if (!loss) cfg.kappa = cfg.gamma = 0.0;
                Trajectory traj = (loss && (cfg.kappa > 0.0 || cfg.gamma > 0.0))
                                      ? evolve_master(cfg)
                                      : evolve_exact(cfg);
                row.backend = traj.backend;
                row.zbar = mean_imbalance(traj).value;
                std::vector<double> g2_left(traj.num_samples());
                for (std::size_t i = 0; i < traj.num_samples(); ++i)
                    g2_left[i] = traj.g2[i][0];
                auto avg = time_average(traj.times, g2_left, 0.0, 20.0);
                row.g2bar = avg.value;
                row.undefined_fraction = avg.undefined_fraction;
                row.ok = true;
            } catch (const std::exception& e) {
                row.message = e.what();
            }
            rows.push_back(std::move(row));
        }
    return rows;
}

} // namespace jch
