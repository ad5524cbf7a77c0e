// compare.hpp — Cross-backend trajectory comparison: linear interpolation onto
// the common time support and per-observable max/RMS deviations.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "jch/observables.hpp"

namespace jch {

struct ObservableDeviation {
    double max_dev = 0.0;
    double rms_dev = 0.0;
    std::size_t samples = 0;
};

struct CompareReport {
    std::map<std::string, ObservableDeviation> observables; // "n", "tls", "Z"
    double tolerance = 0.0;
    bool pass = false;
    double max_dev = 0.0; // worst across observables
};

namespace cmp_detail {

// value of series (t, v) at time x by linear interpolation; t strictly increasing
inline double interp(const std::vector<double>& t, const std::vector<double>& v, double x) {
    auto it = std::lower_bound(t.begin(), t.end(), x);
    if (it == t.end()) return v.back();
    std::size_t i = it - t.begin();
    if (i == 0 || t[i] == x) return v[i];
    double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
    return (1.0 - w) * v[i - 1] + w * v[i];
}

} // namespace cmp_detail

inline CompareReport compare_trajectories(const Trajectory& a, const Trajectory& b,
                                          double tolerance) {
    if (a.num_samples() == 0 || b.num_samples() == 0)
        throw std::invalid_argument("compare_trajectories: empty trajectory");
    const std::size_t M = a.photon[0].size();
    if (b.photon[0].size() != M)
        throw std::invalid_argument("compare_trajectories: site counts differ (" +
                                    std::to_string(M) + " vs " +
                                    std::to_string(b.photon[0].size()) + ")");
    const double t0 = std::max(a.times.front(), b.times.front());
    const double t1 = std::min(a.times.back(), b.times.back());
    if (t0 > t1)
        throw std::invalid_argument("compare_trajectories: no overlapping time support");

    CompareReport rep;
    rep.tolerance = tolerance;

    // per-site series of B, for interpolation
    auto series_of = [](const Trajectory& tr, const std::vector<std::vector<double>>& f,
                        std::size_t j) {
        std::vector<double> s(tr.num_samples());
        for (std::size_t i = 0; i < tr.num_samples(); ++i) s[i] = f[i][j];
        return s;
    };

    auto accumulate = [&](const std::string& name,
                          const std::vector<std::vector<double>>* fa,
                          const std::vector<std::vector<double>>* fb,
                          const std::vector<double>* sa, const std::vector<double>* sb) {
        std::vector<std::vector<double>> b_series;
        if (fb)
            for (std::size_t j = 0; j < M; ++j) b_series.push_back(series_of(b, *fb, j));
        ObservableDeviation dev;
        double sq = 0.0;
        for (std::size_t i = 0; i < a.num_samples(); ++i) {
            double t = a.times[i];
            if (t < t0 || t > t1) continue;
            if (fa) {
                for (std::size_t j = 0; j < M; ++j) {
                    double va = (*fa)[i][j];
                    double vb = cmp_detail::interp(b.times, b_series[j], t);
                    if (std::isnan(va) || std::isnan(vb)) continue;
                    double d = std::abs(va - vb);
                    dev.max_dev = std::max(dev.max_dev, d);
                    sq += d * d;
                    ++dev.samples;
                }
            } else {
                double va = (*sa)[i];
                double vb = cmp_detail::interp(b.times, *sb, t);
                if (std::isnan(va) || std::isnan(vb)) continue;
                double d = std::abs(va - vb);
                dev.max_dev = std::max(dev.max_dev, d);
                sq += d * d;
                ++dev.samples;
            }
        }
        if (dev.samples) dev.rms_dev = std::sqrt(sq / dev.samples);
        rep.observables[name] = dev;
        rep.max_dev = std::max(rep.max_dev, dev.max_dev);
    };

    accumulate("n", &a.photon, &b.photon, nullptr, nullptr);
    if (!a.tls.empty() && !b.tls.empty()) accumulate("tls", &a.tls, &b.tls, nullptr, nullptr);
    accumulate("Z", nullptr, nullptr, &a.imbalance, &b.imbalance);
    rep.pass = rep.max_dev < tolerance;
    return rep;
}

} // namespace jch
