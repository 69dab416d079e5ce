#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mdlhist/grid.hpp"

namespace mdlhist {

/// Irregular histogram on a grid: K intervals delimited by K+1 grid-edge
/// indices 0 = t_0 <= t_1 <= ... <= t_K = E, with interval k covering cells
/// ]t_{k-1}, t_k] and holding h_k observations. Widths are in cell units.
struct HistogramModel {
    std::vector<long long> cuts;    // size K+1, first 0, last E
    std::vector<long long> counts;  // size K

    long long k() const { return static_cast<long long>(counts.size()); }
    long long width(long long i) const {
        return cuts[static_cast<std::size_t>(i) + 1] - cuts[static_cast<std::size_t>(i)];
    }
    long long n() const { return std::accumulate(counts.begin(), counts.end(), 0LL); }
    long long total_width() const { return cuts.back() - cuts.front(); }
};

/// Counts of a cut sequence against binned data; the result is compatible
/// with the data by construction.
inline HistogramModel make_model(const std::vector<long long>& cuts, const BinnedData& bd) {
    if (cuts.size() < 2 || cuts.front() != 0) {
        throw std::invalid_argument("make_model: cuts must start at 0");
    }
    HistogramModel m;
    m.cuts = cuts;
    m.counts.assign(cuts.size() - 1, 0);
    std::size_t k = 0;
    for (const auto& b : bd.bins) {
        while (k + 1 < cuts.size() && b.index > cuts[k + 1]) ++k;
        if (k + 1 >= cuts.size()) throw std::invalid_argument("make_model: cuts do not cover data");
        m.counts[k] += b.count;
    }
    return m;
}

/// True when every interval count matches the data occupancy.
inline bool compatible(const HistogramModel& m, const BinnedData& bd) {
    if (m.cuts.back() < 0) return false;
    std::vector<long long> h(m.counts.size(), 0);
    std::size_t k = 0;
    for (const auto& b : bd.bins) {
        while (k < h.size() && b.index > m.cuts[k + 1]) ++k;
        if (k >= h.size()) return false;
        h[k] += b.count;
    }
    return h == m.counts;
}

/// Piecewise-constant density of the model: h_k / (n * interval_length)
/// inside each interval, 0 outside ]c0, cE].
inline double density_at(const HistogramModel& m, const GridSpec& g, double x) {
    if (x <= g.c0 || x > g.edge(m.cuts.back())) return 0.0;
    const auto it = std::lower_bound(m.cuts.begin() + 1, m.cuts.end(),
                                     x, [&g](long long t, double v) { return g.edge(t) < v; });
    const auto k = static_cast<std::size_t>(std::distance(m.cuts.begin() + 1, it));
    if (k >= m.counts.size()) return 0.0;
    const double len = g.edge(m.cuts[k + 1]) - g.edge(m.cuts[k]);
    if (len <= 0.0) return 0.0;
    return static_cast<double>(m.counts[k]) / (static_cast<double>(m.n()) * len);
}

}  // namespace mdlhist
