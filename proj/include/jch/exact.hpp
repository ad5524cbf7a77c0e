// exact.hpp — Closed-system evolution in the fixed-excitation sector, by full
// spectral decomposition for small dimensions and Lanczos (Krylov) stepping
// for large ones, plus the eigenmode-overlap analysis with the central photon
// current classifier.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jch/config.hpp"
#include "jch/observables.hpp"
#include "jch/operators.hpp"

namespace jch {

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXcd eigenvectors; // orthonormal columns
};

namespace exact_detail {

// Fix each eigenvector's global phase: leading coefficient (first with
// magnitude above 1e-9) made real and positive. Within degenerate groups
// (1e-9 energy window) order by the leading-coefficient position.
inline void stabilize(SpectralDecomposition& sd) {
    const int dim = static_cast<int>(sd.eigenvalues.size());
    std::vector<int> lead(dim, 0);
    for (int k = 0; k < dim; ++k) {
        int l = 0;
        while (l + 1 < dim && std::abs(sd.eigenvectors(l, k)) <= 1e-9) ++l;
        lead[k] = l;
        cd c = sd.eigenvectors(l, k);
        if (std::abs(c) > 0)
            sd.eigenvectors.col(k) *= std::conj(c) / std::abs(c);
    }
    std::vector<int> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (std::abs(sd.eigenvalues(a) - sd.eigenvalues(b)) > 1e-9)
            return sd.eigenvalues(a) < sd.eigenvalues(b);
        return lead[a] < lead[b];
    });
    Eigen::VectorXd ev(dim);
    Eigen::MatrixXcd vecs(dim, dim);
    for (int k = 0; k < dim; ++k) {
        ev(k) = sd.eigenvalues(order[k]);
        vecs.col(k) = sd.eigenvectors.col(order[k]);
    }
    sd.eigenvalues = ev;
    sd.eigenvectors = vecs;
}

} // namespace exact_detail

inline SpectralDecomposition spectral_decompose(const SparseOp& H) {
    Eigen::MatrixXcd Hd(H);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Hd);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectral_decompose: eigensolver failed");
    SpectralDecomposition sd{es.eigenvalues(), es.eigenvectors()};
    exact_detail::stabilize(sd);
    return sd;
}

// One Lanczos step: psi -> exp(-i H dt) psi, Krylov dimension adapted up to
// m_max, substepping in time when the residual estimate exceeds tol.
inline Vec krylov_expm(const SparseOp& H, const Vec& psi0, double dt,
                       int m_max = 30, double tol = 1e-12) {
    const auto dim = psi0.size();
    const int m_cap = std::min<long>(m_max, dim);
    int substeps = 1;
    for (;;) {
        Vec psi = psi0;
        double h = dt / substeps;
        bool accurate = true;
        for (int step = 0; step < substeps && accurate; ++step) {
            double nrm = psi.norm();
            Eigen::MatrixXcd V(dim, m_cap);
            Eigen::VectorXd a(m_cap), b(m_cap);
            V.col(0) = psi / nrm;
            int m = m_cap;
            double b_last = 0.0;
            for (int k = 0; k < m_cap; ++k) {
                Vec w = H * V.col(k);
                // full reorthogonalization: cheap at these m, keeps T accurate
                for (int l = 0; l <= k; ++l) {
                    cd c = V.col(l).dot(w);
                    if (l == k) a(k) = c.real();
                    w -= c * V.col(l);
                }
                for (int l = 0; l <= k; ++l)
                    w -= V.col(l).dot(w) * V.col(l);
                double beta = w.norm();
                if (k + 1 == m_cap || beta < 1e-14) {
                    m = k + 1;
                    b_last = beta;
                    break;
                }
                b(k) = beta;
                V.col(k + 1) = w / beta;
            }
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
            for (int k = 0; k < m; ++k) {
                T(k, k) = a(k);
                if (k + 1 < m) T(k, k + 1) = T(k + 1, k) = b(k);
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
            Eigen::VectorXcd phases(m);
            for (int k = 0; k < m; ++k)
                phases(k) = std::exp(cd(0.0, -es.eigenvalues()(k) * h));
            Eigen::VectorXcd small = es.eigenvectors().cast<cd>() *
                (phases.array() * es.eigenvectors().row(0).transpose().cast<cd>().array()).matrix();
            double err = b_last * std::abs(small(m - 1));
            if (err > tol && m == m_cap && substeps < (1 << 16)) {
                accurate = false;
                break;
            }
            psi = nrm * (V.leftCols(m) * small);
        }
        if (accurate) return psi;
        substeps *= 2;
    }
}

namespace exact_detail {

struct DiagonalObservables {
    Eigen::VectorXd n_tot;                 // total excitation per basis state
    std::vector<Eigen::VectorXd> n;        // per-site photon number
    std::vector<Eigen::VectorXd> tls;      // per-site TLS excitation
    std::vector<Eigen::VectorXd> nn1;      // per-site n(n-1)
};

inline DiagonalObservables diagonals(const SubspaceBasis& basis) {
    const int M = basis.num_sites();
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    DiagonalObservables d;
    d.n_tot.resize(dim);
    d.n.assign(M, Eigen::VectorXd(dim));
    d.tls.assign(M, Eigen::VectorXd(dim));
    d.nn1.assign(M, Eigen::VectorXd(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto& s = basis.state(i);
        d.n_tot(i) = s.total_excitation();
        for (int j = 0; j < M; ++j) {
            d.n[j](i) = s.photons[j];
            d.tls[j](i) = s.tls[j];
            d.nn1[j](i) = static_cast<double>(s.photons[j]) * (s.photons[j] - 1);
        }
    }
    return d;
}

inline void record_sample(Trajectory& traj, const Vec& psi, double t, int M,
                          const DiagonalObservables& d, const SparseOp& H) {
    Eigen::VectorXd p = psi.cwiseAbs2();
    std::vector<double> n(M), tls(M), g2(M);
    for (int j = 0; j < M; ++j) {
        n[j] = d.n[j].dot(p);
        tls[j] = d.tls[j].dot(p);
        double nn1 = d.nn1[j].dot(p);
        g2[j] = n[j] > 1e-6 ? nn1 / (n[j] * n[j]) : kUndefined;
    }
    traj.times.push_back(t);
    traj.imbalance.push_back(imbalance(n, M));
    traj.photon.push_back(std::move(n));
    traj.tls.push_back(std::move(tls));
    traj.g2.push_back(std::move(g2));
    traj.monitors["norm"].push_back(psi.norm());
    traj.monitors["N_total"].push_back(d.n_tot.dot(p));
    traj.monitors["energy"].push_back(psi.dot(H * psi).real());
}

} // namespace exact_detail

inline constexpr int kSpectralDimLimit = 4000;

inline Trajectory evolve_exact(const SimulationConfig& cfg) {
    cfg.validate();
    auto basis = enumerate_subspace(cfg.M, cfg.effective_n_max(), cfg.total_excitation());
    const auto dim = basis.dimension();
    if (dim > static_cast<std::size_t>(cfg.dim_budget))
        throw CapacityError("evolve_exact: subspace dimension " + std::to_string(dim) +
                            " exceeds the configured budget " + std::to_string(cfg.dim_budget));
    auto H = build_hamiltonian(basis, cfg);
    Vec psi = build_initial_state(basis, cfg);
    auto diag = exact_detail::diagonals(basis);

    Trajectory traj;
    traj.backend = dim <= kSpectralDimLimit ? "exact-spectral" : "exact-krylov";
    traj.config_hash = cfg.hash();
    const int M = cfg.M;
    const long steps = std::lround(cfg.t_max / cfg.sample_dt);

    if (dim <= kSpectralDimLimit) {
        auto sd = spectral_decompose(H);
        Eigen::VectorXcd c0 = sd.eigenvectors.adjoint() * psi;
        for (long i = 0; i <= steps; ++i) {
            double t = i * cfg.sample_dt;
            Eigen::VectorXcd phases(sd.eigenvalues.size());
            for (Eigen::Index k = 0; k < phases.size(); ++k)
                phases(k) = std::exp(cd(0.0, -sd.eigenvalues(k) * t));
            Vec psit = sd.eigenvectors * (phases.array() * c0.array()).matrix();
            exact_detail::record_sample(traj, psit, t, M, diag, H);
        }
    } else {
        exact_detail::record_sample(traj, psi, 0.0, M, diag, H);
        for (long i = 1; i <= steps; ++i) {
            psi = krylov_expm(H, psi, cfg.sample_dt, cfg.krylov_max, 1e-11);
            exact_detail::record_sample(traj, psi, i * cfg.sample_dt, M, diag, H);
        }
    }
    return traj;
}

// |<a†_{M/2} a_{M/2+1}>| on a state, accumulated by walking the basis.
inline double mode_current(const Vec& mode, const SubspaceBasis& basis) {
    const int M = basis.num_sites();
    if (M < 2 || M % 2 != 0)
        throw std::invalid_argument("mode_current: need an even number of sites");
    const int l = M / 2 - 1, r = M / 2; // 0-based centre pair
    cd acc = 0.0;
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        const auto& s = basis.state(i);
        if (s.photons[r] == 0 || s.photons[l] >= basis.n_max()) continue;
        SiteConfiguration t = s;
        t.photons[r] -= 1;
        t.photons[l] += 1;
        long long k = basis.index_of(t);
        if (k < 0) continue;
        double amp = std::sqrt(static_cast<double>(s.photons[r]) * (s.photons[l] + 1.0));
        acc += std::conj(mode[k]) * amp * mode[i];
    }
    return std::abs(acc);
}

struct ModeInfo {
    double energy = 0.0;
    double overlap = 0.0;   // ||<Psi(0)|Psi_j>||^2
    double current = 0.0;   // C_j
    char label = 'N';       // 'P' propagating / 'N' non-propagating
    int degeneracy_group = 0;
};

struct ModeAnalysis {
    std::vector<ModeInfo> modes;
    double overlap_sum = 0.0;
    std::string config_hash;
};

inline constexpr double kCurrentThreshold = 1e-3; // photons; P/N classifier

inline ModeAnalysis spectral_overlaps(const SimulationConfig& cfg,
                                      double eps_c = kCurrentThreshold) {
    cfg.validate();
    auto basis = enumerate_subspace(cfg.M, cfg.effective_n_max(), cfg.total_excitation());
    if (basis.dimension() > static_cast<std::size_t>(kSpectralDimLimit))
        throw CapacityError("spectral_overlaps: dimension " +
                            std::to_string(basis.dimension()) +
                            " too large for full decomposition (limit " +
                            std::to_string(kSpectralDimLimit) + ")");
    auto H = build_hamiltonian(basis, cfg);
    auto sd = spectral_decompose(H);
    Vec psi0 = build_initial_state(basis, cfg);

    ModeAnalysis out;
    out.config_hash = cfg.hash();
    int group = 0;
    for (Eigen::Index k = 0; k < sd.eigenvalues.size(); ++k) {
        if (k > 0 && sd.eigenvalues(k) - sd.eigenvalues(k - 1) > 1e-9) ++group;
        ModeInfo m;
        m.energy = sd.eigenvalues(k);
        m.overlap = std::norm(sd.eigenvectors.col(k).dot(psi0));
        m.current = mode_current(sd.eigenvectors.col(k), basis);
        m.label = m.current > eps_c ? 'P' : 'N';
        m.degeneracy_group = group;
        out.overlap_sum += m.overlap;
        out.modes.push_back(m);
    }
    return out;
}

} // namespace jch
