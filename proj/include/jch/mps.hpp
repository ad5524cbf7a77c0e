// mps.hpp — Open-boundary matrix-product state over composite TLS ⊗ Fock
// sites, kept in Vidal (Γ, λ) form. Bond indices carry the cumulative
// excitation charge so the two-site truncation can run per symmetry block.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <lapacke.h>

#include "jch/basis.hpp"
#include "jch/config.hpp"
#include "jch/operators.hpp"

namespace jch {

class MPSState {
public:
    // Product-state constructor: `occupation[j]` photons on site j, TLSs in
    // the ground state. Bond dimension 1 everywhere.
    MPSState(int num_sites, int n_max, const std::vector<int>& occupation)
        : M_(num_sites), n_max_(n_max), d_(2 * (n_max + 1)) {
        if (static_cast<int>(occupation.size()) != M_)
            throw std::invalid_argument("MPSState: occupation size != M");
        gamma_.resize(M_);
        lambda_.assign(M_ + 1, Eigen::VectorXd::Ones(1));
        charge_.assign(M_ + 1, {0});
        int cum = 0;
        for (int j = 0; j < M_; ++j) {
            if (occupation[j] < 0 || occupation[j] > n_max)
                throw std::invalid_argument("MPSState: occupation outside [0, n_max]");
            gamma_[j].assign(d_, Eigen::MatrixXcd::Zero(1, 1));
            gamma_[j][occupation[j]](0, 0) = 1.0;
            cum += occupation[j];
            charge_[j + 1] = {cum};
        }
    }

    int num_sites() const { return M_; }
    int n_max() const { return n_max_; }
    int local_dim() const { return d_; }
    int bond_dim(int b) const { return static_cast<int>(lambda_[b].size()); }
    int max_bond_dim() const {
        int m = 0;
        for (int b = 0; b <= M_; ++b) m = std::max(m, bond_dim(b));
        return m;
    }
    double discarded_weight() const { return discarded_; }
    const Eigen::VectorXd& lambda(int b) const { return lambda_[b]; }
    const std::vector<int>& bond_charge(int b) const { return charge_[b]; }

    // local excitation carried by a physical index
    int local_charge(int p) const { return p / (n_max_ + 1) + p % (n_max_ + 1); }

    // ---- gates -------------------------------------------------------------

    void apply_single_site(int j, const Eigen::MatrixXcd& U) {
        check_site(j);
        std::vector<Eigen::MatrixXcd> out(d_);
        for (int p = 0; p < d_; ++p)
            out[p] = Eigen::MatrixXcd::Zero(gamma_[j][p].rows(), gamma_[j][p].cols());
        for (int pp = 0; pp < d_; ++pp)
            for (int p = 0; p < d_; ++p) {
                cd u = U(pp, p);
                if (std::abs(u) > 1e-16) out[pp] += u * gamma_[j][p];
            }
        gamma_[j] = std::move(out);
    }

    // Two-site gate on (j, j+1). The gate must conserve the combined local
    // charge; truncation keeps min(chi, rank) singular values and drops any
    // with squared weight below drop_tol. Returns the weight discarded by
    // this gate (also accumulated internally).
    double apply_two_site(int j, const Eigen::SparseMatrix<cd>& gate,
                          int chi, double drop_tol = 1e-20) {
        check_site(j);
        if (j + 1 >= M_) throw std::invalid_argument("apply_two_site: no right neighbour");
        const int chiL = bond_dim(j), chiR = bond_dim(j + 2);

        // Theta[p][q] = λL Γ_j[p] λM Γ_{j+1}[q] λR
        std::vector<Eigen::MatrixXcd> A(d_), B(d_);
        for (int p = 0; p < d_; ++p) {
            A[p] = lambda_[j].asDiagonal() * gamma_[j][p] * lambda_[j + 1].asDiagonal();
            B[p] = gamma_[j + 1][p] * lambda_[j + 2].asDiagonal();
        }
        std::vector<std::vector<Eigen::MatrixXcd>> theta(
            d_, std::vector<Eigen::MatrixXcd>(d_));
        std::vector<std::vector<bool>> has(d_, std::vector<bool>(d_, false));
        std::vector<std::vector<Eigen::MatrixXcd>> ab(d_, std::vector<Eigen::MatrixXcd>(d_));
        std::vector<std::vector<bool>> ab_has(d_, std::vector<bool>(d_, false));
        for (int k = 0; k < gate.outerSize(); ++k)
            for (Eigen::SparseMatrix<cd>::InnerIterator it(gate, k); it; ++it) {
                int p = static_cast<int>(it.col()) / d_, q = static_cast<int>(it.col()) % d_;
                int pp = static_cast<int>(it.row()) / d_, qq = static_cast<int>(it.row()) % d_;
                if (!ab_has[p][q]) {
                    ab[p][q] = A[p] * B[q];
                    ab_has[p][q] = true;
                }
                if (!has[pp][qq]) {
                    theta[pp][qq] = it.value() * ab[p][q];
                    has[pp][qq] = true;
                } else {
                    theta[pp][qq] += it.value() * ab[p][q];
                }
            }

        // group rows (a,p) and columns (q,b) by the new mid-bond charge
        std::map<int, std::vector<std::pair<int, int>>> rows, cols;
        for (int p = 0; p < d_; ++p)
            for (int a = 0; a < chiL; ++a)
                rows[charge_[j][a] + local_charge(p)].push_back({a, p});
        for (int q = 0; q < d_; ++q)
            for (int b = 0; b < chiR; ++b)
                cols[charge_[j + 2][b] - local_charge(q)].push_back({q, b});

        struct Block {
            int m;
            std::vector<std::pair<int, int>> rows, cols;
            Eigen::MatrixXcd U, Vd;
            Eigen::VectorXd s;
        };
        std::vector<Block> blocks;
        double total_weight = 0.0;
        for (auto& [m, r] : rows) {
            auto itc = cols.find(m);
            if (itc == cols.end()) continue;
            Block blk;
            blk.m = m;
            blk.rows = r;
            blk.cols = itc->second;
            Eigen::MatrixXcd S(blk.rows.size(), blk.cols.size());
            for (std::size_t ri = 0; ri < blk.rows.size(); ++ri)
                for (std::size_t ci = 0; ci < blk.cols.size(); ++ci) {
                    auto [a, p] = blk.rows[ri];
                    auto [q, b] = blk.cols[ci];
                    S(ri, ci) = has[p][q] ? theta[p][q](a, b) : cd(0.0);
                }
            svd(S, blk.U, blk.s, blk.Vd);
            for (Eigen::Index k2 = 0; k2 < blk.s.size(); ++k2)
                total_weight += blk.s(k2) * blk.s(k2);
            blocks.push_back(std::move(blk));
        }
        if (blocks.empty() || total_weight <= 0.0)
            throw std::runtime_error("apply_two_site: state annihilated by gate");

        // global truncation across blocks
        struct Sv { double s; int blk; int idx; };
        std::vector<Sv> all;
        for (std::size_t bi = 0; bi < blocks.size(); ++bi)
            for (Eigen::Index k2 = 0; k2 < blocks[bi].s.size(); ++k2)
                all.push_back({blocks[bi].s(k2), static_cast<int>(bi), static_cast<int>(k2)});
        std::sort(all.begin(), all.end(), [](const Sv& x, const Sv& y) {
            if (x.s != y.s) return x.s > y.s;
            if (x.blk != y.blk) return x.blk < y.blk;
            return x.idx < y.idx;
        });
        std::vector<Sv> kept;
        double kept_weight = 0.0;
        for (const auto& sv : all) {
            if (static_cast<int>(kept.size()) >= chi) break;
            if (sv.s * sv.s < drop_tol && !kept.empty()) break;
            kept.push_back(sv);
            kept_weight += sv.s * sv.s;
        }
        double discarded = 1.0 - kept_weight / total_weight;
        discarded = std::max(discarded, 0.0);
        discarded_ += discarded;

        // new mid bond (renormalized to unit norm)
        const int chiM = static_cast<int>(kept.size());
        Eigen::VectorXd lam(chiM);
        std::vector<int> chg(chiM);
        double scale = 1.0 / std::sqrt(kept_weight);
        for (int k2 = 0; k2 < chiM; ++k2) {
            lam(k2) = kept[k2].s * scale;
            chg[k2] = blocks[kept[k2].blk].m;
        }

        // scatter U and V† back into Γ tensors, undoing the outer λ weights
        Eigen::VectorXd invL(chiL), invR(chiR);
        for (int a = 0; a < chiL; ++a)
            invL(a) = lambda_[j](a) > 1e-14 ? 1.0 / lambda_[j](a) : 0.0;
        for (int b = 0; b < chiR; ++b)
            invR(b) = lambda_[j + 2](b) > 1e-14 ? 1.0 / lambda_[j + 2](b) : 0.0;
        std::vector<Eigen::MatrixXcd> gl(d_, Eigen::MatrixXcd::Zero(chiL, chiM));
        std::vector<Eigen::MatrixXcd> gr(d_, Eigen::MatrixXcd::Zero(chiM, chiR));
        for (int k2 = 0; k2 < chiM; ++k2) {
            const Block& blk = blocks[kept[k2].blk];
            int col = kept[k2].idx;
            for (std::size_t ri = 0; ri < blk.rows.size(); ++ri) {
                auto [a, p] = blk.rows[ri];
                gl[p](a, k2) = blk.U(ri, col) * invL(a);
            }
            for (std::size_t ci = 0; ci < blk.cols.size(); ++ci) {
                auto [q, b] = blk.cols[ci];
                gr[q](k2, b) = blk.Vd(col, ci) * invR(b);
            }
        }
        gamma_[j] = std::move(gl);
        gamma_[j + 1] = std::move(gr);
        lambda_[j + 1] = std::move(lam);
        charge_[j + 1] = std::move(chg);
        return discarded;
    }

    // ---- observables (canonical-form contraction) --------------------------

    // Expectation of a diagonal single-site observable given by its d values.
    double expect_diagonal(int j, const Eigen::VectorXd& diag) const {
        check_site(j);
        double acc = 0.0, norm = 0.0;
        for (int p = 0; p < d_; ++p) {
            Eigen::MatrixXcd m = lambda_[j].asDiagonal() * gamma_[j][p] *
                                 lambda_[j + 1].asDiagonal();
            double w = m.squaredNorm();
            acc += diag(p) * w;
            norm += w;
        }
        return norm > 0.0 ? acc / norm : 0.0;
    }

    double site_norm(int j) const {
        check_site(j);
        double norm = 0.0;
        for (int p = 0; p < d_; ++p)
            norm += (lambda_[j].asDiagonal() * gamma_[j][p] *
                     lambda_[j + 1].asDiagonal()).squaredNorm();
        return std::sqrt(norm);
    }

    // Amplitudes on an enumerated sector basis; exact contraction, intended
    // for small systems and cross-checks.
    Vec sector_vector(const SubspaceBasis& basis) const {
        if (basis.num_sites() != M_ || basis.n_max() != n_max_)
            throw std::invalid_argument("sector_vector: basis mismatch");
        Vec out(basis.dimension());
        for (std::size_t i = 0; i < basis.dimension(); ++i) {
            Eigen::RowVectorXcd v = Eigen::RowVectorXcd::Ones(1);
            for (int j = 0; j < M_; ++j) {
                int p = basis.local_index(basis.state(i), j);
                v = v * gamma_[j][p] * lambda_[j + 1].asDiagonal();
            }
            out[i] = v(0);
        }
        return out;
    }

    // ---- checkpointing -----------------------------------------------------

    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open checkpoint for writing: " + path);
        auto w32 = [&](std::int32_t x) { f.write(reinterpret_cast<const char*>(&x), 4); };
        auto wd = [&](double x) { f.write(reinterpret_cast<const char*>(&x), 8); };
        w32(0x4d505331); // "MPS1"
        w32(M_); w32(n_max_); w32(d_);
        wd(discarded_);
        for (int b = 0; b <= M_; ++b) {
            w32(bond_dim(b));
            for (int a = 0; a < bond_dim(b); ++a) {
                wd(lambda_[b](a));
                w32(charge_[b][a]);
            }
        }
        for (int j = 0; j < M_; ++j)
            for (int p = 0; p < d_; ++p) {
                const auto& g = gamma_[j][p];
                w32(static_cast<std::int32_t>(g.rows()));
                w32(static_cast<std::int32_t>(g.cols()));
                for (Eigen::Index r = 0; r < g.rows(); ++r)
                    for (Eigen::Index c = 0; c < g.cols(); ++c) {
                        wd(g(r, c).real());
                        wd(g(r, c).imag());
                    }
            }
    }

    static MPSState load(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
        auto r32 = [&]() { std::int32_t x; f.read(reinterpret_cast<char*>(&x), 4); return x; };
        auto rd = [&]() { double x; f.read(reinterpret_cast<char*>(&x), 8); return x; };
        if (r32() != 0x4d505331) throw std::runtime_error("bad checkpoint magic");
        int M = r32(), n_max = r32(), d = r32();
        MPSState s(M, n_max, std::vector<int>(M, 0));
        if (s.d_ != d) throw std::runtime_error("checkpoint local dimension mismatch");
        s.discarded_ = rd();
        for (int b = 0; b <= M; ++b) {
            int dim = r32();
            s.lambda_[b].resize(dim);
            s.charge_[b].resize(dim);
            for (int a = 0; a < dim; ++a) {
                s.lambda_[b](a) = rd();
                s.charge_[b][a] = r32();
            }
        }
        for (int j = 0; j < M; ++j)
            for (int p = 0; p < d; ++p) {
                int rows = r32(), c = r32();
                s.gamma_[j][p].resize(rows, c);
                for (int r = 0; r < rows; ++r)
                    for (int cc = 0; cc < c; ++cc) {
                        double re = rd(), im = rd();
                        s.gamma_[j][p](r, cc) = cd(re, im);
                    }
            }
        if (!f) throw std::runtime_error("truncated checkpoint file");
        return s;
    }

private:
    void check_site(int j) const {
        if (j < 0 || j >= M_) throw std::invalid_argument("site index out of range");
    }

    static void svd(const Eigen::MatrixXcd& A, Eigen::MatrixXcd& U,
                    Eigen::VectorXd& s, Eigen::MatrixXcd& Vd) {
        const int m = static_cast<int>(A.rows()), n = static_cast<int>(A.cols());
        const int k = std::min(m, n);
        U.resize(m, k);
        s.resize(k);
        Vd.resize(k, n);
        if (k == 0) return;
        Eigen::MatrixXcd work = A; // zgesdd overwrites its input
        int info = LAPACKE_zgesdd(
            LAPACK_COL_MAJOR, 'S', m, n,
            reinterpret_cast<lapack_complex_double*>(work.data()), m, s.data(),
            reinterpret_cast<lapack_complex_double*>(U.data()), m,
            reinterpret_cast<lapack_complex_double*>(Vd.data()), k);
        if (info != 0) {
            // zgesdd occasionally fails to converge; zgesvd is the slow
            // reliable fallback
            work = A;
            Eigen::JacobiSVD<Eigen::MatrixXcd> j(work, Eigen::ComputeThinU | Eigen::ComputeThinV);
            U = j.matrixU();
            s = j.singularValues();
            Vd = j.matrixV().adjoint();
        }
    }

    int M_, n_max_, d_;
    std::vector<std::vector<Eigen::MatrixXcd>> gamma_; // gamma_[site][p]
    std::vector<Eigen::VectorXd> lambda_;              // lambda_[bond]
    std::vector<std::vector<int>> charge_;             // cumulative excitation
    double discarded_ = 0.0;
};

// Bond-dimension-1 MPS for the half-filled initial state.
inline MPSState mps_from_product(const SimulationConfig& cfg) {
    if (cfg.M % 2 != 0)
        throw std::invalid_argument("mps_from_product: M must be even");
    int n_max = cfg.effective_n_max();
    if (n_max < cfg.N0)
        throw std::invalid_argument("mps_from_product: cutoff n_max < N0");
    std::vector<int> occ(cfg.M, 0);
    for (int j = 0; j < cfg.M / 2; ++j) occ[j] = cfg.N0;
    return MPSState(cfg.M, n_max, occ);
}

} // namespace jch
