// basis.hpp — Enumeration of fixed-total-excitation subspaces of the
// resonator array. Each site carries a composite TLS ⊗ Fock local space with
// local index i = tls*(n_max+1) + n.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace jch {

struct EmptySubspaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SiteConfiguration {
    std::vector<int> photons;     // per-site photon occupation
    std::vector<std::uint8_t> tls; // per-site TLS excitation (0 or 1)

    int total_excitation() const {
        int n = 0;
        for (int p : photons) n += p;
        for (auto e : tls) n += e;
        return n;
    }

    bool operator==(const SiteConfiguration&) const = default;
};

class SubspaceBasis {
public:
    SubspaceBasis(int num_sites, int n_max, int n_total)
        : num_sites_(num_sites), n_max_(n_max), n_total_(n_total) {
        if (num_sites < 1) throw std::invalid_argument("basis: M must be >= 1");
        if (n_max < 1) throw std::invalid_argument("basis: n_max must be >= 1");
        if (n_total < 0) throw std::invalid_argument("basis: N_total must be >= 0");
        local_dim_ = 2 * (n_max + 1);
        bits_per_site_ = 1;
        while ((1 << bits_per_site_) < local_dim_) ++bits_per_site_;
        if (bits_per_site_ * num_sites > 64)
            throw std::invalid_argument("basis: configuration does not fit a 64-bit key");
        std::vector<int> local(num_sites, 0);
        enumerate(0, n_total, local);
        if (states_.empty())
            throw EmptySubspaceError("empty subspace: no configuration of " +
                                     std::to_string(num_sites) + " sites with n_max=" +
                                     std::to_string(n_max) + " reaches N_total=" +
                                     std::to_string(n_total));
    }

    int num_sites() const { return num_sites_; }
    int n_max() const { return n_max_; }
    int n_total() const { return n_total_; }
    int local_dim() const { return local_dim_; }
    std::size_t dimension() const { return states_.size(); }

    const SiteConfiguration& state(std::size_t i) const { return states_[i]; }
    const std::vector<SiteConfiguration>& states() const { return states_; }

    // Local composite index at a site: tls*(n_max+1) + n.
    int local_index(const SiteConfiguration& c, int site0) const {
        return c.tls[site0] * (n_max_ + 1) + c.photons[site0];
    }

    // Index of a configuration, or -1 when absent (e.g. above the cutoff or
    // in a different excitation sector).
    long long index_of(const SiteConfiguration& c) const {
        auto it = index_.find(key(c));
        return it == index_.end() ? -1 : static_cast<long long>(it->second);
    }

private:
    void enumerate(int site, int remaining, std::vector<int>& local) {
        if (site == num_sites_) {
            if (remaining == 0) push(local);
            return;
        }
        // lexicographic over the flattened local indices
        for (int l = 0; l < local_dim_; ++l) {
            int exc = l / (n_max_ + 1) + l % (n_max_ + 1);
            if (exc > remaining) continue;
            local[site] = l;
            enumerate(site + 1, remaining - exc, local);
        }
        local[site] = 0;
    }

    void push(const std::vector<int>& local) {
        SiteConfiguration c;
        c.photons.resize(num_sites_);
        c.tls.resize(num_sites_);
        for (int j = 0; j < num_sites_; ++j) {
            c.tls[j] = static_cast<std::uint8_t>(local[j] / (n_max_ + 1));
            c.photons[j] = local[j] % (n_max_ + 1);
        }
        index_[key(c)] = states_.size();
        states_.push_back(std::move(c));
    }

    std::uint64_t key(const SiteConfiguration& c) const {
        std::uint64_t k = 0;
        for (int j = 0; j < num_sites_; ++j)
            k = (k << bits_per_site_) | static_cast<std::uint64_t>(local_index(c, j));
        return k;
    }

    int num_sites_, n_max_, n_total_, local_dim_, bits_per_site_;
    std::vector<SiteConfiguration> states_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

inline SubspaceBasis enumerate_subspace(int num_sites, int n_max, int n_total) {
    return SubspaceBasis(num_sites, n_max, n_total);
}

} // namespace jch
