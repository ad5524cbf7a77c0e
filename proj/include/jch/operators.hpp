// operators.hpp — Sparse operators over a fixed-excitation subspace:
// the array Hamiltonian, the total-excitation operator, and per-site
// photon / TLS operators.

#pragma once

#include <cmath>
#include <complex>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "jch/basis.hpp"
#include "jch/config.hpp"

namespace jch {

using cd = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<cd>;
using Vec = Eigen::VectorXcd;

enum class SiteOp { annihilate_photon, lower_tls, number_photon, number_tls };

namespace detail {
using Triplets = std::vector<Eigen::Triplet<cd>>;
}

// H = Σ_j [ω_r n_j + ω_a σ+σ−_j + g(a†_j σ−_j + a_j σ+_j)] − J Σ_<j,j'> a†_j a_j'
// with open boundaries. In the rotating frame the bare frequencies drop out
// (the model is evaluated on resonance only).
inline SparseOp build_hamiltonian(const SubspaceBasis& basis, double omega_r,
                                  double omega_a, double g, double J) {
    const int M = basis.num_sites();
    const int n_max = basis.n_max();
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    detail::Triplets trip;
    trip.reserve(basis.dimension() * (3 * M));
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        const SiteConfiguration& s = basis.state(i);
        double diag = 0.0;
        for (int j = 0; j < M; ++j)
            diag += omega_r * s.photons[j] + omega_a * s.tls[j];
        if (diag != 0.0)
            trip.emplace_back(i, i, cd(diag, 0.0));
        for (int j = 0; j < M; ++j) {
            // a†_j σ−_j : TLS de-excites, photon number rises
            if (s.tls[j] == 1 && s.photons[j] < n_max) {
                SiteConfiguration t = s;
                t.tls[j] = 0;
                t.photons[j] += 1;
                long long k = basis.index_of(t);
                if (k >= 0) {
                    double amp = g * std::sqrt(static_cast<double>(t.photons[j]));
                    trip.emplace_back(k, i, cd(amp, 0.0));
                    trip.emplace_back(i, k, cd(amp, 0.0)); // a_j σ+_j partner
                }
            }
            // hopping a†_j a_{j+1} + a†_{j+1} a_j
            if (j + 1 < M && s.photons[j + 1] > 0 && s.photons[j] < n_max) {
                SiteConfiguration t = s;
                t.photons[j + 1] -= 1;
                t.photons[j] += 1;
                long long k = basis.index_of(t);
                if (k >= 0) {
                    double amp = -J * std::sqrt(static_cast<double>(s.photons[j + 1]) *
                                                (s.photons[j] + 1.0));
                    trip.emplace_back(k, i, cd(amp, 0.0));
                    trip.emplace_back(i, k, cd(amp, 0.0));
                }
            }
        }
    }
    SparseOp H(dim, dim);
    H.setFromTriplets(trip.begin(), trip.end());
    return H;
}

inline SparseOp build_hamiltonian(const SubspaceBasis& basis, const SimulationConfig& cfg) {
    if (basis.num_sites() != cfg.M || basis.n_max() != cfg.effective_n_max())
        throw std::invalid_argument("build_hamiltonian: basis does not match config (M or n_max)");
    if (cfg.frame == Frame::rotating)
        return build_hamiltonian(basis, 0.0, 0.0, cfg.g, cfg.J);
    return build_hamiltonian(basis, cfg.omega_r, cfg.omega_a, cfg.g, cfg.J);
}

// Total excitation operator N = Σ_j (n_j + σ+σ−_j); diagonal in this basis.
inline SparseOp build_total_excitation(const SubspaceBasis& basis) {
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    detail::Triplets trip;
    trip.reserve(basis.dimension());
    for (std::size_t i = 0; i < basis.dimension(); ++i)
        trip.emplace_back(i, i, cd(basis.state(i).total_excitation(), 0.0));
    SparseOp N(dim, dim);
    N.setFromTriplets(trip.begin(), trip.end());
    return N;
}

// Per-site operator. Number operators are square over `basis`; the lowering
// operators map the N-excitation sector to the (N−1)-sector and need the
// target basis. `site` is 1-based.
inline SparseOp build_site_operator(const SubspaceBasis& basis, int site, SiteOp kind,
                                    const SubspaceBasis* target = nullptr) {
    if (site < 1 || site > basis.num_sites())
        throw std::invalid_argument("site index out of range: " + std::to_string(site));
    const int j = site - 1;
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    detail::Triplets trip;
    if (kind == SiteOp::number_photon || kind == SiteOp::number_tls) {
        for (std::size_t i = 0; i < basis.dimension(); ++i) {
            double v = (kind == SiteOp::number_photon)
                           ? basis.state(i).photons[j]
                           : basis.state(i).tls[j];
            if (v != 0.0) trip.emplace_back(i, i, cd(v, 0.0));
        }
        SparseOp op(dim, dim);
        op.setFromTriplets(trip.begin(), trip.end());
        return op;
    }
    // sector-lowering operators
    std::optional<SubspaceBasis> owned;
    if (!target)
        owned.emplace(basis.num_sites(), basis.n_max(),
                      basis.n_total() > 0 ? basis.n_total() - 1 : 0);
    const SubspaceBasis& local_target = target ? *target : *owned;
    if (local_target.n_total() != basis.n_total() - 1 ||
        local_target.num_sites() != basis.num_sites() ||
        local_target.n_max() != basis.n_max())
        throw std::invalid_argument("build_site_operator: target basis must be the (N-1) sector");
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        const SiteConfiguration& s = basis.state(i);
        SiteConfiguration t = s;
        double amp = 0.0;
        if (kind == SiteOp::annihilate_photon) {
            if (s.photons[j] == 0) continue;
            t.photons[j] -= 1;
            amp = std::sqrt(static_cast<double>(s.photons[j]));
        } else { // lower_tls
            if (s.tls[j] == 0) continue;
            t.tls[j] = 0;
            amp = 1.0;
        }
        long long k = local_target.index_of(t);
        if (k >= 0) trip.emplace_back(k, i, cd(amp, 0.0));
    }
    SparseOp op(static_cast<Eigen::Index>(local_target.dimension()), dim);
    op.setFromTriplets(trip.begin(), trip.end());
    return op;
}

// Eq.-style half-filled initial state: N0 photons on each of the first M/2
// sites, all TLSs in the ground state.
inline Vec build_initial_state(const SubspaceBasis& basis, const SimulationConfig& cfg) {
    if (basis.n_total() != cfg.total_excitation())
        throw std::invalid_argument("build_initial_state: basis sector != N0*M/2");
    if (basis.n_max() < cfg.N0)
        throw std::invalid_argument("build_initial_state: cutoff n_max < N0");
    SiteConfiguration c;
    c.photons.assign(cfg.M, 0);
    c.tls.assign(cfg.M, 0);
    for (int j = 0; j < cfg.M / 2; ++j) c.photons[j] = cfg.N0;
    long long k = basis.index_of(c);
    if (k < 0)
        throw std::invalid_argument("build_initial_state: initial configuration absent from basis");
    Vec psi = Vec::Zero(static_cast<Eigen::Index>(basis.dimension()));
    psi[k] = 1.0;
    return psi;
}

inline double hermiticity_defect(const SparseOp& A) {
    SparseOp D = SparseOp(A - SparseOp(A.adjoint()));
    double m = 0.0;
    for (int k = 0; k < D.outerSize(); ++k)
        for (SparseOp::InnerIterator it(D, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

inline bool is_hermitian(const SparseOp& A, double tol = 1e-12) {
    return A.rows() == A.cols() && hermiticity_defect(A) <= tol;
}

// Plain-text triplet dump: header lines, then one "row col re im" per entry.
inline void dump_sparse_triplets(std::ostream& os, const SparseOp& A,
                                 const std::string& label, const std::string& params) {
    os << "# jch sparse operator: " << label << "\n";
    os << "# params: " << params << "\n";
    os << "# rows cols nnz: " << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";
    os.precision(17);
    for (int k = 0; k < A.outerSize(); ++k)
        for (SparseOp::InnerIterator it(A, k); it; ++it)
            os << it.row() << " " << it.col() << " "
               << it.value().real() << " " << it.value().imag() << "\n";
}

inline SparseOp load_sparse_triplets(std::istream& is) {
    std::string line;
    long long rows = -1, cols = -1, nnz = -1;
    detail::Triplets trip;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("rows cols nnz:");
            if (pos != std::string::npos) {
                std::istringstream ss(line.substr(pos + 14));
                ss >> rows >> cols >> nnz;
            }
            continue;
        }
        std::istringstream ss(line);
        long long r, c;
        double re, im;
        if (ss >> r >> c >> re >> im)
            trip.emplace_back(r, c, cd(re, im));
    }
    if (rows < 0 || cols < 0)
        throw std::runtime_error("triplet file missing dimension header");
    SparseOp A(rows, cols);
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

} // namespace jch
