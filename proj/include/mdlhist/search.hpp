#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "mdlhist/criteria.hpp"
#include "mdlhist/grid.hpp"
#include "mdlhist/model.hpp"

namespace mdlhist {

/// Raised when an exact search would exceed its state budget.
class BudgetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Search output. The model's cut indices live on `grid` (cell units of the
/// lattice the fit ran on; for granulated fits these are coarse cells).
struct FitResult {
    HistogramModel model;
    GridSpec grid;
    CostBreakdown cost;
    long long granularity = 0;  // selected G; 0 for plain fits
    long long iterations = 0;   // merges + accepted post-optimization moves
    double wall_seconds = 0.0;
};

struct FitOptions {
    bool post_optimize = true;
    int max_post_passes = 16;
    long long full_lattice_max_cells = 4096;  // below this, start from every cell
    double improvement_eps = 1e-9;            // strict-improvement threshold
};

// ---------------------------------------------------------------------------
// Segmentation lattice: the cells the search may group into intervals.
// Either every grid cell, or the cells delimited by the candidate cuts.
// ---------------------------------------------------------------------------

struct Lattice {
    std::vector<long long> pos;  // cell boundaries in grid-cell units; pos[0] = 0
    std::vector<long long> cum;  // prefix data counts; cum[i] = count left of pos[i]

    long long cell_count() const { return static_cast<long long>(pos.size()) - 1; }
    long long count(long long i, long long j) const {
        return cum[static_cast<std::size_t>(j)] - cum[static_cast<std::size_t>(i)];
    }
    long long width(long long i, long long j) const {
        return pos[static_cast<std::size_t>(j)] - pos[static_cast<std::size_t>(i)];
    }
};

inline Lattice full_lattice(const BinnedData& bd, long long cells) {
    Lattice lat;
    lat.pos.resize(static_cast<std::size_t>(cells) + 1);
    for (long long t = 0; t <= cells; ++t) lat.pos[static_cast<std::size_t>(t)] = t;
    lat.cum.assign(static_cast<std::size_t>(cells) + 1, 0);
    for (const auto& b : bd.bins) lat.cum[static_cast<std::size_t>(b.index)] = b.count;
    for (std::size_t i = 1; i < lat.cum.size(); ++i) lat.cum[i] += lat.cum[i - 1];
    return lat;
}

/// Lattice over an explicit, sorted cut list (must start at 0 and end at
/// the grid cell count).
inline Lattice lattice_from_cuts(const BinnedData& bd, std::vector<long long> cuts) {
    if (cuts.size() < 2 || cuts.front() != 0 || !std::is_sorted(cuts.begin(), cuts.end())) {
        throw std::invalid_argument("lattice_from_cuts: cuts must be sorted and start at 0");
    }
    Lattice lat;
    lat.pos = std::move(cuts);
    lat.cum.assign(lat.pos.size(), 0);
    std::size_t bi = 0;
    for (std::size_t i = 1; i < lat.pos.size(); ++i) {
        long long c = lat.cum[i - 1];
        while (bi < bd.bins.size() && bd.bins[bi].index <= lat.pos[i]) {
            c += bd.bins[bi].count;
            ++bi;
        }
        lat.cum[i] = c;
    }
    if (lat.cum.back() != bd.total) {
        throw std::invalid_argument("lattice_from_cuts: cuts do not cover the data");
    }
    return lat;
}

inline Lattice candidate_lattice(const BinnedData& bd, const GridSpec& g) {
    return lattice_from_cuts(bd, candidate_cuts(bd, g));
}

inline Lattice make_lattice(const BinnedData& bd, const GridSpec& g, const FitOptions& opt) {
    return g.cells <= opt.full_lattice_max_cells ? full_lattice(bd, g.cells)
                                                 : candidate_lattice(bd, g);
}

namespace detail {

// Compensated accumulator for the running criterion value.
struct KahanSum {
    double sum = 0.0, carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Greedy bottom-up merging (one interval per lattice cell to start, best
// merge first). All merges are carried out down to a single interval and the
// cheapest model seen along the way is kept.
//
// Queue entries hold only the K-free local part of the merge delta; the
// K-dependent part is common to every pair at a given step, so the ordering
// is unaffected and entries never go stale when K drops.
// ---------------------------------------------------------------------------

template <class Crit>
class SearchState {
  public:
    SearchState(const Lattice& lat, const Crit& crit) : lat_(lat), crit_(crit) {
        const long long c = lat.cell_count();
        if (c >= static_cast<long long>(std::numeric_limits<std::uint32_t>::max())) {
            throw std::invalid_argument("SearchState: lattice too large");
        }
        h_.resize(static_cast<std::size_t>(c));
        w_.resize(static_cast<std::size_t>(c));
        next_.resize(static_cast<std::size_t>(c));
        prev_.resize(static_cast<std::size_t>(c));
        stamp_.assign(static_cast<std::size_t>(c), 0);
        alive_.assign(static_cast<std::size_t>(c), 1);
        for (long long i = 0; i < c; ++i) {
            h_[static_cast<std::size_t>(i)] = lat.count(i, i + 1);
            w_[static_cast<std::size_t>(i)] = lat.width(i, i + 1);
            next_[static_cast<std::size_t>(i)] = i + 1 < c ? i + 1 : -1;
            prev_[static_cast<std::size_t>(i)] = i - 1;
        }
        k_ = c;
        cost_.add(crit.q1(c));
        for (long long i = 0; i < c; ++i) {
            cost_.add(crit.q2(h_[static_cast<std::size_t>(i)], w_[static_cast<std::size_t>(i)]));
        }
        best_cost_ = cost_.value();
        best_step_ = 0;
        // bulk heapify: O(C) instead of C pushes
        std::vector<Entry> initial;
        initial.reserve(static_cast<std::size_t>(std::max<long long>(0, c - 1)));
        for (long long i = 0; i + 1 < c; ++i) {
            initial.push_back(Entry{local_delta(i, i + 1), static_cast<std::uint32_t>(i), 0});
        }
        queue_ = Queue(std::greater<Entry>{}, std::move(initial));
    }

    long long interval_count() const { return k_; }
    long long pair_count() const { return k_ - 1; }
    double running_cost() const { return cost_.value(); }
    double best_cost() const { return best_cost_; }
    long long steps() const { return static_cast<long long>(merges_.size()); }

    /// Applies the cheapest pending merge; false once a single interval is left.
    bool merge_step() {
        while (!queue_.empty()) {
            const Entry e = queue_.top();
            if (!valid(e)) {
                queue_.pop();
                continue;
            }
            queue_.pop();
            apply_merge(e.left, e.local);
            return true;
        }
        return false;
    }

    /// Lattice cut indices of the cheapest model seen, rebuilt by replaying
    /// the merge sequence up to the best step. Merges always keep the left
    /// member, so walking the successor links from cell 0 visits survivors.
    std::vector<long long> best_cuts() const {
        const long long c = lat_.cell_count();
        std::vector<long long> next(static_cast<std::size_t>(c));
        for (long long i = 0; i < c; ++i) {
            next[static_cast<std::size_t>(i)] = i + 1 < c ? i + 1 : -1;
        }
        for (long long s = 0; s < best_step_; ++s) {
            const long long i = merges_[static_cast<std::size_t>(s)];
            const long long j = next[static_cast<std::size_t>(i)];
            next[static_cast<std::size_t>(i)] = next[static_cast<std::size_t>(j)];
        }
        std::vector<long long> cuts;
        cuts.push_back(0);
        for (long long i = 0; i != -1; i = next[static_cast<std::size_t>(i)]) {
            cuts.push_back(next[static_cast<std::size_t>(i)] == -1
                               ? c
                               : next[static_cast<std::size_t>(i)]);
        }
        return cuts;
    }

  private:
    struct Entry {
        double local;
        std::uint32_t left;
        std::uint32_t stamp;
        bool operator>(const Entry& o) const {
            if (local != o.local) return local > o.local;
            return left > o.left;
        }
    };
    using Queue = std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>>;

    bool valid(const Entry& e) const {
        return alive_[e.left] && stamp_[e.left] == e.stamp && next_[e.left] != -1;
    }

    void enqueue(long long i) {
        const long long j = next_[static_cast<std::size_t>(i)];
        if (j == -1) return;
        const double local = local_delta(i, j);
        queue_.push(Entry{local, static_cast<std::uint32_t>(i),
                          stamp_[static_cast<std::size_t>(i)]});
    }

    double local_delta(long long i, long long j) const {
        const auto a = static_cast<std::size_t>(i);
        const auto b = static_cast<std::size_t>(j);
        return crit_.q2(h_[a] + h_[b], w_[a] + w_[b]) -
               (crit_.q2(h_[a], w_[a]) + crit_.q2(h_[b], w_[b]));
    }

    void apply_merge(long long i, double local) {
        const auto a = static_cast<std::size_t>(i);
        const long long j = next_[a];
        const auto b = static_cast<std::size_t>(j);
        cost_.add(crit_.q1_drop(k_) + local);
        h_[a] += h_[b];
        w_[a] += w_[b];
        alive_[b] = 0;
        next_[a] = next_[b];
        if (next_[a] != -1) prev_[static_cast<std::size_t>(next_[a])] = i;
        ++stamp_[a];
        if (prev_[a] != -1) ++stamp_[static_cast<std::size_t>(prev_[a])];
        --k_;
        merges_.push_back(i);
        if (cost_.value() < best_cost_) {
            best_cost_ = cost_.value();
            best_step_ = steps();
        }
        if (prev_[a] != -1) enqueue(prev_[a]);
        enqueue(i);
    }

    const Lattice& lat_;
    const Crit& crit_;
    std::vector<long long> h_, w_, next_, prev_;
    std::vector<std::uint32_t> stamp_;
    std::vector<char> alive_;
    Queue queue_;
    detail::KahanSum cost_;
    long long k_ = 0;
    double best_cost_ = 0.0;
    long long best_step_ = 0;
    std::vector<long long> merges_;
};

// ---------------------------------------------------------------------------
// Post-optimization: hill climbing over {split, merge, merge three then
// resplit, nudge one boundary to the adjacent lattice cut}, first
// improvement, until a full pass finds nothing (pass count capped).
// ---------------------------------------------------------------------------

template <class Crit>
long long post_optimize_lattice(std::vector<long long>& cuts, const Lattice& lat,
                                const Crit& crit, const FitOptions& opt) {
    const double eps = opt.improvement_eps;
    long long moves = 0;
    const auto q2 = [&](long long si, long long sj) {
        return crit.q2(lat.count(si, sj), lat.width(si, sj));
    };

    for (int pass = 0; pass < opt.max_post_passes; ++pass) {
        bool improved = false;
        // Split an interval at its best internal lattice cut.
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const long long a = cuts[k], b = cuts[k + 1];
            if (b - a < 2) continue;
            if (lat.count(a, b) == 0) continue;  // splitting an empty interval never pays
            const long long kk = static_cast<long long>(cuts.size()) - 1;
            const double rise = -crit.q1_drop(kk + 1);  // q1(K+1) - q1(K)
            const double base = q2(a, b);
            double best = -eps;
            long long best_c = -1;
            for (long long c = a + 1; c < b; ++c) {
                const double d = rise + q2(a, c) + q2(c, b) - base;
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            if (best_c != -1) {
                cuts.insert(cuts.begin() + static_cast<std::ptrdiff_t>(k) + 1, best_c);
                improved = true;
                ++moves;
            }
        }
        // Merge adjacent intervals.
        for (std::size_t k = 0; k + 2 < cuts.size();) {
            const long long kk = static_cast<long long>(cuts.size()) - 1;
            const double d = crit.q1_drop(kk) + q2(cuts[k], cuts[k + 2]) - q2(cuts[k], cuts[k + 1]) -
                             q2(cuts[k + 1], cuts[k + 2]);
            if (d < -eps) {
                cuts.erase(cuts.begin() + static_cast<std::ptrdiff_t>(k) + 1);
                improved = true;
                ++moves;
            } else {
                ++k;
            }
        }
        // Merge three consecutive intervals, resplit at the best internal cut.
        for (std::size_t k = 0; k + 3 < cuts.size(); ++k) {
            const long long a = cuts[k], b = cuts[k + 3];
            const long long kk = static_cast<long long>(cuts.size()) - 1;
            const double drop = crit.q1_drop(kk);  // K -> K-1
            const double base = q2(cuts[k], cuts[k + 1]) + q2(cuts[k + 1], cuts[k + 2]) +
                                q2(cuts[k + 2], cuts[k + 3]);
            double best = -eps;
            long long best_c = -1;
            for (long long c = a + 1; c < b; ++c) {
                const double d = drop + q2(a, c) + q2(c, b) - base;
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            if (best_c != -1) {
                cuts[k + 1] = best_c;
                cuts.erase(cuts.begin() + static_cast<std::ptrdiff_t>(k) + 2);
                improved = true;
                ++moves;
            }
        }
        // Nudge one boundary to the adjacent lattice cut, repeatedly while
        // it keeps paying (a single step per pass could not cross the long
        // monotone stretches of the cell-index term).
        for (std::size_t k = 1; k + 1 < cuts.size(); ++k) {
            const long long a = cuts[k - 1], b = cuts[k + 1];
            bool moved = true;
            while (moved) {
                moved = false;
                const double base = q2(a, cuts[k]) + q2(cuts[k], b);
                for (const long long c : {cuts[k] - 1, cuts[k] + 1}) {
                    if (c <= a || c >= b) continue;
                    const double d = q2(a, c) + q2(c, b) - base;
                    if (d < -eps) {
                        cuts[k] = c;
                        improved = true;
                        moved = true;
                        ++moves;
                        break;
                    }
                }
            }
        }
        if (!improved) break;
    }
    return moves;
}

namespace detail {

inline HistogramModel model_from_lattice_cuts(const std::vector<long long>& cuts,
                                              const Lattice& lat) {
    HistogramModel m;
    m.cuts.reserve(cuts.size());
    m.counts.reserve(cuts.size() - 1);
    for (const long long s : cuts) m.cuts.push_back(lat.pos[static_cast<std::size_t>(s)]);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        m.counts.push_back(lat.count(cuts[i], cuts[i + 1]));
    }
    return m;
}

}  // namespace detail

/// Greedy fit on a prepared lattice: merge to a single interval, keep the
/// cheapest model seen, then post-optimize it.
template <class Crit>
FitResult greedy_fit_lattice(const Lattice& lat, const GridSpec& grid, const Crit& crit,
                             const FitOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    SearchState<Crit> state(lat, crit);
    while (state.merge_step()) {
    }
    std::vector<long long> cuts_idx = state.best_cuts();
    long long moves = 0;
    if (opt.post_optimize) {
        moves = post_optimize_lattice(cuts_idx, lat, crit, opt);
    }
    FitResult res;
    res.model = detail::model_from_lattice_cuts(cuts_idx, lat);
    res.grid = grid;
    res.cost = crit.breakdown(res.model);
    res.iterations = state.steps() + moves;
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

/// Exact minimum over all segmentations of the lattice with at most k_max
/// intervals, by dynamic programming in O(C^2 k_max).
template <class Crit>
FitResult dp_optimal_lattice(const Lattice& lat, const GridSpec& grid, const Crit& crit,
                             long long k_max, double state_budget = 1e8) {
    const auto t0 = std::chrono::steady_clock::now();
    const long long c = lat.cell_count();
    k_max = std::min(k_max, c);
    if (k_max < 1) throw std::invalid_argument("dp_optimal: k_max must be >= 1");
    if (static_cast<double>(c) * static_cast<double>(c) * static_cast<double>(k_max) >
        state_budget) {
        throw BudgetError("dp_optimal: state budget exceeded");
    }

    const auto q2 = [&](long long i, long long j) {
        return crit.q2(lat.count(i, j), lat.width(i, j));
    };

    std::vector<double> prev_row(static_cast<std::size_t>(c) + 1, kInfiniteCost);
    std::vector<double> row(static_cast<std::size_t>(c) + 1, kInfiniteCost);
    // parent[k][j]: start cell of the last interval in the best k-split of [0, j)
    std::vector<std::vector<std::int32_t>> parent(
        static_cast<std::size_t>(k_max) + 1,
        std::vector<std::int32_t>(static_cast<std::size_t>(c) + 1, -1));

    for (long long j = 1; j <= c; ++j) {
        prev_row[static_cast<std::size_t>(j)] = q2(0, j);
        parent[1][static_cast<std::size_t>(j)] = 0;
    }
    double best_total = crit.q1(1) + prev_row[static_cast<std::size_t>(c)];
    long long best_k = 1;

    for (long long k = 2; k <= k_max; ++k) {
        for (long long j = k; j <= c; ++j) {
            double best = kInfiniteCost;
            std::int32_t arg = -1;
            for (long long i = k - 1; i < j; ++i) {
                const double v = prev_row[static_cast<std::size_t>(i)] + q2(i, j);
                if (v < best) {
                    best = v;
                    arg = static_cast<std::int32_t>(i);
                }
            }
            row[static_cast<std::size_t>(j)] = best;
            parent[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = arg;
        }
        const double total = crit.q1(k) + row[static_cast<std::size_t>(c)];
        if (total < best_total) {
            best_total = total;
            best_k = k;
        }
        std::swap(prev_row, row);
        std::fill(row.begin(), row.end(), kInfiniteCost);
    }

    std::vector<long long> cuts_idx(static_cast<std::size_t>(best_k) + 1, 0);
    cuts_idx[static_cast<std::size_t>(best_k)] = c;
    for (long long k = best_k; k >= 2; --k) {
        cuts_idx[static_cast<std::size_t>(k - 1)] =
            parent[static_cast<std::size_t>(k)][static_cast<std::size_t>(cuts_idx[static_cast<std::size_t>(k)])];
    }

    FitResult res;
    res.model = detail::model_from_lattice_cuts(cuts_idx, lat);
    res.grid = grid;
    res.cost = crit.breakdown(res.model);
    res.iterations = 0;
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

/// Default interval-count cap: an optimal model never needs more (and the
/// lattice cannot host more than its cell count).
inline long long default_k_max(long long n, long long lattice_cells) {
    return std::max<long long>(1, std::min(2 * n - 2, lattice_cells));
}

// ---------------------------------------------------------------------------
// Public fit entry points.
// ---------------------------------------------------------------------------

template <class Crit>
FitResult greedy_fit(const BinnedData& bd, const GridSpec& grid, const Crit& crit,
                     const FitOptions& opt = {}) {
    const Lattice lat = make_lattice(bd, grid, opt);
    return greedy_fit_lattice(lat, grid, crit, opt);
}

template <class Crit>
FitResult dp_optimal(const BinnedData& bd, const GridSpec& grid, const Crit& crit,
                     long long k_max = -1, const FitOptions& opt = {},
                     double state_budget = 1e8) {
    const Lattice lat = make_lattice(bd, grid, opt);
    if (k_max < 0) k_max = default_k_max(bd.total, lat.cell_count());
    return dp_optimal_lattice(lat, grid, crit, k_max, state_budget);
}

// ---------------------------------------------------------------------------
// Granulated fit: fix the fine grid at E = 2^30 cells, fit the enumerative
// criterion on every power-of-two granularity, score each winner with the
// granulated criterion, and keep the overall best (ties to the smaller G).
// Granularities above 4n are skipped: the candidate cuts stop changing once
// every distinct value sits in its own coarse cell (validated in tests
// against the unrestricted loop).
// ---------------------------------------------------------------------------

struct GenumOptions {
    long long full_cells = kDefaultFullGridCells;
    bool restrict_granularities = true;
    FitOptions fit;
};

inline FitResult genum_fit(const Dataset& d, const GenumOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const long long n = d.n();

    FitResult best;
    bool have_best = false;
    long long iterations = 0;

    if (d.domain_length() == 0.0) {
        // Degenerate domain: a single cell, a single interval.
        const GridSpec grid = build_grid_by_E(d, 1);
        best.model.cuts = {0, 1};
        best.model.counts = {n};
        best.grid = grid;
        best.granularity = 1;
        best.cost = genum_cost(best.model, n, make_granularity(1, opt.full_cells));
        best.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return best;
    }

    const GridSpec base = build_grid_by_E(d, opt.full_cells);
    const BinnedData fine = bin_data(d, base);

    for (int i = 0; (1LL << i) <= opt.full_cells; ++i) {
        const long long G = 1LL << i;
        if (opt.restrict_granularities && G > 4 * n && G > 1) break;
        const GridSpec coarse = coarsen_grid(base, opt.full_cells / G);
        const BinnedData gbins = G == opt.full_cells ? fine : coarsen_bins(fine, opt.full_cells / G);
        const EnumCriterion crit{n, G};
        FitResult fit = greedy_fit(gbins, coarse, crit, opt.fit);
        iterations += fit.iterations;
        const CostBreakdown score =
            genum_cost(fit.model, n, make_granularity(G, opt.full_cells));
        if (!have_best || score.total < best.cost.total) {
            best = fit;
            best.cost = score;
            best.granularity = G;
            have_best = true;
        }
    }
    best.iterations = iterations;
    best.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return best;
}

/// Number of observations sitting in singular intervals: width exactly one
/// cell, non-empty, and all values inside identical.
inline long long count_singular(const HistogramModel& m, const BinnedData& bd,
                                const GridSpec& /*grid*/) {
    long long s = 0;
    for (long long k = 0; k < m.k(); ++k) {
        if (m.width(k) != 1) continue;
        const long long h = m.counts[static_cast<std::size_t>(k)];
        if (h == 0) continue;
        const auto* bin = bd.find(m.cuts[static_cast<std::size_t>(k) + 1]);
        if (bin != nullptr && bin->count == h && bin->all_equal) s += h;
    }
    return s;
}

}  // namespace mdlhist
