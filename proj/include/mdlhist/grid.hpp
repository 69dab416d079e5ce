#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mdlhist/dataset.hpp"

namespace mdlhist {

/// Regular lattice of E elementary cells spanning ]c0, cE] with
/// cE - c0 = L + epsilon and c0 = x_min - epsilon/2, so every observation
/// falls strictly inside. For grids built from an accuracy epsilon the cell
/// width equals epsilon; a coarsened grid (see coarsen_grid) keeps the same
/// span but groups cells, so its cell width is a multiple of epsilon.
struct GridSpec {
    double epsilon = 1.0;  // accuracy parameter, data units
    long long cells = 1;   // number of elementary cells (E, or G when coarsened)
    double c0 = 0.0;
    double cE = 0.0;

    double cell_width() const { return (cE - c0) / static_cast<double>(cells); }
    double edge(long long t) const { return c0 + static_cast<double>(t) * cell_width(); }
};

/// Snaps a requested accuracy so that the cell count is integral:
/// E = max(1, round(L/eps) + 1), then eps = L/(E-1) for E > 1. This keeps
/// E * eps = L + eps exact. A zero-length domain yields the single-cell grid.
inline GridSpec build_grid(const Dataset& d, double epsilon_req) {
    if (!(epsilon_req > 0.0)) throw std::invalid_argument("build_grid: epsilon must be positive");
    const double L = d.domain_length();
    GridSpec g;
    if (L == 0.0) {
        g.epsilon = epsilon_req;
        g.cells = 1;
    } else {
        if (L / epsilon_req > static_cast<double>(1LL << 40)) {
            throw std::invalid_argument("build_grid: accuracy too fine for the domain length");
        }
        const long long E = std::max<long long>(1, std::llround(L / epsilon_req) + 1);
        g.cells = E;
        g.epsilon = E > 1 ? L / static_cast<double>(E - 1) : epsilon_req;
    }
    g.c0 = d.x_min() - g.epsilon / 2.0;
    g.cE = d.x_max() + g.epsilon / 2.0;
    return g;
}

/// Fixes the cell count directly; eps = L/(E-1) for E > 1. E = 1 keeps a
/// single cell spanning the whole domain (eps = L, or 1 for L = 0).
inline GridSpec build_grid_by_E(const Dataset& d, long long E) {
    if (E < 1) throw std::invalid_argument("build_grid_by_E: E must be >= 1");
    const double L = d.domain_length();
    GridSpec g;
    if (L == 0.0) {
        g.epsilon = 1.0;
        g.cells = 1;
    } else if (E == 1) {
        g.epsilon = L;
        g.cells = 1;
    } else {
        g.epsilon = L / static_cast<double>(E - 1);
        g.cells = E;
    }
    g.c0 = d.x_min() - g.epsilon / 2.0;
    g.cE = d.x_max() + g.epsilon / 2.0;
    return g;
}

/// Groups every `factor` consecutive cells into one. Span and epsilon are
/// unchanged; only the lattice resolution drops.
inline GridSpec coarsen_grid(const GridSpec& g, long long factor) {
    if (factor < 1 || g.cells % factor != 0) {
        throw std::invalid_argument("coarsen_grid: factor must divide the cell count");
    }
    GridSpec out = g;
    out.cells = g.cells / factor;
    return out;
}

/// Sparse image of a dataset on a grid: the occupied cells, each with its
/// count and whether all its observations share one value.
struct BinnedData {
    struct Bin {
        long long index;  // cell index in [1, cells]
        long long count;
        bool all_equal;   // every observation in this cell has the same value
    };
    std::vector<Bin> bins;  // sorted by index
    long long total = 0;

    const Bin* find(long long index) const {
        auto it = std::lower_bound(bins.begin(), bins.end(), index,
                                   [](const Bin& b, long long i) { return b.index < i; });
        return (it != bins.end() && it->index == index) ? &*it : nullptr;
    }
};

/// Cell index of x: cells are half-open ]edge(t-1), edge(t)], so a value
/// sitting exactly on an edge belongs to the cell ending there.
inline long long cell_of(const GridSpec& g, double x) {
    const long long t = static_cast<long long>(std::ceil((x - g.c0) / g.cell_width()));
    return std::clamp<long long>(t, 1, g.cells);
}

/// Maps every observation to its cell. Input order does not matter: the
/// dataset is already sorted, so bins come out sorted by index.
inline BinnedData bin_data(const Dataset& d, const GridSpec& g) {
    BinnedData bd;
    bd.total = d.n();
    for (std::size_t i = 0; i < d.values.size();) {
        const long long t = cell_of(g, d.values[i]);
        long long count = 0;
        bool all_equal = true;
        const double first = d.values[i];
        while (i < d.values.size() && cell_of(g, d.values[i]) == t) {
            if (d.values[i] != first) all_equal = false;
            ++count;
            ++i;
        }
        bd.bins.push_back({t, count, all_equal});
    }
    return bd;
}

/// Re-bins onto a coarsened grid (cell index ceil(t/factor)); the all_equal
/// flag degrades to "all merged cells were single-valued with equal values"
/// only when one fine cell feeds the coarse cell, which is the conservative
/// truth available without the raw data.
inline BinnedData coarsen_bins(const BinnedData& fine, long long factor) {
    BinnedData out;
    out.total = fine.total;
    for (std::size_t i = 0; i < fine.bins.size();) {
        const long long t = (fine.bins[i].index + factor - 1) / factor;
        long long count = 0;
        bool all_equal = true;
        std::size_t merged = 0;
        while (i < fine.bins.size() && (fine.bins[i].index + factor - 1) / factor == t) {
            count += fine.bins[i].count;
            all_equal = all_equal && fine.bins[i].all_equal;
            ++merged;
            ++i;
        }
        out.bins.push_back({t, count, merged == 1 ? all_equal : false});
    }
    return out;
}

/// Candidate cut positions: for every occupied cell t both flanking edges
/// t-1 and t, plus the domain edges 0 and E. Deduplicated and sorted; size
/// is at most 2 * (#occupied cells) + 2.
inline std::vector<long long> candidate_cuts(const BinnedData& bd, const GridSpec& g) {
    std::vector<long long> cuts;
    cuts.reserve(2 * bd.bins.size() + 2);
    cuts.push_back(0);
    for (const auto& b : bd.bins) {
        cuts.push_back(b.index - 1);
        cuts.push_back(b.index);
    }
    cuts.push_back(g.cells);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

/// Candidate cuts from the raw values: per distinct value, the edge
/// immediately at-or-left of it and the edge immediately right of it.
inline std::vector<long long> candidate_cuts(const Dataset& d, const GridSpec& g) {
    std::vector<long long> cuts;
    cuts.reserve(2 * d.values.size() + 2);
    cuts.push_back(0);
    const double w = g.cell_width();
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        if (i > 0 && d.values[i] == d.values[i - 1]) continue;
        const long long left =
            std::clamp<long long>(static_cast<long long>(std::floor((d.values[i] - g.c0) / w)),
                                  0, g.cells);
        cuts.push_back(left);
        cuts.push_back(std::min<long long>(left + 1, g.cells));
    }
    cuts.push_back(g.cells);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

}  // namespace mdlhist
