// observables.hpp — Backend-agnostic summary observables: the left/right
// photon imbalance Z and windowed time averages.

#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jch {

// Per-site time series shared by all backends. Row index = sample, column =
// site. g2 entries are NaN where undefined (vanishing occupation).
struct Trajectory {
    std::vector<double> times;                 // units of 1/J
    std::vector<std::vector<double>> photon;   // <n_j>(t)
    std::vector<std::vector<double>> tls;      // <sigma+sigma->_j(t)
    std::vector<std::vector<double>> g2;       // g2_j(t) or NaN; may be empty
    std::vector<double> imbalance;             // Z(t) or NaN when undefined
    std::map<std::string, std::vector<double>> monitors;
    std::vector<std::string> warnings;
    std::string backend;
    std::string config_hash;

    std::size_t num_samples() const { return times.size(); }
    int num_sites() const { return photon.empty() ? 0 : static_cast<int>(photon[0].size()); }
};

inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
inline bool is_defined(double x) { return !std::isnan(x); }

// Z = (sum_left n - sum_right n) / sum n. Undefined (NaN) when the total
// photon number has decayed to nothing.
inline double imbalance(const std::vector<double>& n, int M,
                        double zero_total_eps = 1e-12) {
    if (M < 2 || M % 2 != 0 || static_cast<int>(n.size()) != M)
        throw std::invalid_argument("imbalance: need an even number of sites matching n");
    double left = 0.0, right = 0.0;
    for (int j = 0; j < M / 2; ++j) left += n[j];
    for (int j = M / 2; j < M; ++j) right += n[j];
    double total = left + right;
    if (total <= zero_total_eps) return kUndefined;
    return (left - right) / total;
}

struct TimeAverage {
    double value = kUndefined;
    bool clipped = false;        // window extended past the series support
    double undefined_fraction = 0.0;
};

// Trapezoidal time-weighted mean over [t0, t1]. Segments with an undefined
// endpoint are skipped and the weight renormalized. Throws when no defined
// segment overlaps the window.
inline TimeAverage time_average(const std::vector<double>& t,
                                const std::vector<double>& v,
                                double t0, double t1) {
    if (t.size() != v.size() || t.size() < 2)
        throw std::invalid_argument("time_average: need at least two samples");
    if (t1 < t0)
        throw std::invalid_argument("time_average: window reversed");
    TimeAverage out;
    if (t0 < t.front() || t1 > t.back()) {
        out.clipped = true;
        t0 = std::max(t0, t.front());
        t1 = std::min(t1, t.back());
    }
    if (t1 <= t0)
        throw std::invalid_argument("time_average: window does not overlap series support");
    double acc = 0.0, weight = 0.0, span = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        double a = std::max(t[i], t0), b = std::min(t[i + 1], t1);
        if (b <= a) continue;
        span += b - a;
        if (!is_defined(v[i]) || !is_defined(v[i + 1])) continue;
        // linear interpolation of the endpoints onto the clipped segment
        double h = t[i + 1] - t[i];
        double va = v[i] + (v[i + 1] - v[i]) * (a - t[i]) / h;
        double vb = v[i] + (v[i + 1] - v[i]) * (b - t[i]) / h;
        acc += 0.5 * (va + vb) * (b - a);
        weight += b - a;
    }
    if (weight == 0.0)
        throw std::invalid_argument("time_average: no defined samples in window");
    out.value = acc / weight;
    out.undefined_fraction = span > 0.0 ? 1.0 - weight / span : 0.0;
    return out;
}

// Z̄ over the standard reporting window tJ in [0, 20] (clipped to the run).
inline TimeAverage mean_imbalance(const Trajectory& traj, double t0 = 0.0, double t1 = 20.0) {
    return time_average(traj.times, traj.imbalance, t0, t1);
}

} // namespace jch
