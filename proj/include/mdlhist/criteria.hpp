#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mdlhist/logcomb.hpp"
#include "mdlhist/model.hpp"

namespace mdlhist {

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();
inline constexpr long long kDefaultFullGridCells = 1LL << 30;

/// Criterion value split into its three term groups (all nats).
struct CostBreakdown {
    double index_terms = 0.0;        // model indexing (priors on K, widths, G)
    double multinomial_terms = 0.0;  // count-vector prior + multinomial likelihood
    double bin_index_terms = 0.0;    // within-interval cell indexing
    double total = 0.0;

    static CostBreakdown sum(double index, double multinomial, double bin_index) {
        return {index, multinomial, bin_index, index + multinomial + bin_index};
    }
    static CostBreakdown infinite() {
        return {0.0, 0.0, 0.0, kInfiniteCost};
    }
};

namespace detail {

// h * ln(w) with the 0 * ln 0 = 0 convention; +inf marks an interval that
// holds data but no cells (model incompatible with any data set).
inline double cell_index_term(long long h, long long w) {
    if (h == 0) return 0.0;
    if (w == 0) return kInfiniteCost;
    return static_cast<double>(h) * std::log(static_cast<double>(w));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Additive cost models. Each criterion decomposes as
//     cost(M) = q1(n, K) + sum_k q2(h_k, w_k)
// which is what both the greedy merge loop and the dynamic program rely on.
// ---------------------------------------------------------------------------

/// Two-part enumerative code: universal prior on K, uniform priors on the
/// interval composition and on the count vector, multinomial mapping cost,
/// and per-interval cell indexing.
struct EnumCriterion {
    long long n = 0;
    long long total_cells = 0;  // E (or G when scoring on a coarsened lattice)

    double q1(long long k) const {
        return log_star(k) + log_binomial(total_cells + k - 1, k - 1) +
               log_binomial(n + k - 1, k - 1) + log_factorial(n);
    }
    double q2(long long h, long long w) const {
        if (h == 0) return 0.0;
        if (w == 0) return kInfiniteCost;
        return -log_factorial(h) + detail::cell_index_term(h, w);
    }

    /// q1(K-1) - q1(K): the part of a merge delta every pair shares. Exact
    /// difference of the binomial and universal-prior terms.
    double q1_drop(long long k) const {
        const double dk = static_cast<double>(k - 1);
        return std::log(dk / static_cast<double>(total_cells + k - 1)) +
               std::log(dk / static_cast<double>(n + k - 1)) + log_star(k - 1) - log_star(k);
    }

    /// cost(K-1 model) - cost(K model) for merging adjacent intervals A, B;
    /// exact difference of the criterion, O(1). Terms are grouped so the
    /// result is bit-identical under swapping A and B.
    double merge_delta(long long h_a, long long w_a, long long h_b, long long w_b,
                       long long k) const {
        double delta = q1_drop(k);
        delta += (log_factorial(h_a) + log_factorial(h_b)) - log_factorial(h_a + h_b);
        delta += detail::cell_index_term(h_a + h_b, w_a + w_b) -
                 (detail::cell_index_term(h_a, w_a) + detail::cell_index_term(h_b, w_b));
        return delta;
    }

    CostBreakdown breakdown(const HistogramModel& m) const;
};

/// Normalized-maximum-likelihood criterion. The parametric complexity table
/// must cover every K the search will touch; build it once per fit with
/// nml_log_complexity_table.
struct NmlCriterion {
    long long n = 0;
    long long total_cells = 0;
    std::vector<double> log_complexity;  // index K, entries 0..K_max

    double q1(long long k) const {
        return log_binomial(total_cells, k - 1) + log_complexity.at(static_cast<std::size_t>(k)) +
               static_cast<double>(n) * std::log(static_cast<double>(n));
    }
    double q2(long long h, long long w) const {
        if (h == 0) return 0.0;
        if (w == 0) return kInfiniteCost;
        return -static_cast<double>(h) * std::log(static_cast<double>(h)) +
               detail::cell_index_term(h, w);
    }
    double q1_drop(long long k) const {
        return std::log(static_cast<double>(k - 1) / static_cast<double>(total_cells - k + 2)) +
               log_complexity.at(static_cast<std::size_t>(k - 1)) -
               log_complexity.at(static_cast<std::size_t>(k));
    }
    double merge_delta(long long h_a, long long w_a, long long h_b, long long w_b,
                       long long k) const {
        return q1_drop(k) + q2(h_a + h_b, w_a + w_b) - (q2(h_a, w_a) + q2(h_b, w_b));
    }

    CostBreakdown breakdown(const HistogramModel& m) const;
};

// ---------------------------------------------------------------------------
// Full criterion evaluations with per-term breakdowns.
// ---------------------------------------------------------------------------

/// Enumerative criterion of a model against (n, E). Returns the +inf
/// sentinel when some interval has data but zero width.
inline CostBreakdown enum_cost(const HistogramModel& m, long long n, long long E) {
    const long long k = m.k();
    double bin_index = 0.0;
    double log_mult = log_factorial(n);
    for (long long i = 0; i < k; ++i) {
        const double t = detail::cell_index_term(m.counts[static_cast<std::size_t>(i)],
                                                 m.width(i));
        if (t == kInfiniteCost) return CostBreakdown::infinite();
        bin_index += t;
        log_mult -= log_factorial(m.counts[static_cast<std::size_t>(i)]);
    }
    const double index = log_star(k) + log_binomial(E + k - 1, k - 1);
    const double multinomial = log_binomial(n + k - 1, k - 1) + log_mult;
    return CostBreakdown::sum(index, multinomial, bin_index);
}

/// Granularity bookkeeping: a full lattice of E_full cells viewed through G
/// coarse cells of g = E_full / G fine cells each.
struct GranularityContext {
    long long full_cells = kDefaultFullGridCells;  // E
    long long granularity = 1;                     // G, must divide E

    long long group_size() const { return full_cells / granularity; }  // g
};

inline GranularityContext make_granularity(long long G,
                                           long long full_cells = kDefaultFullGridCells) {
    if (G < 1 || full_cells % G != 0) {
        throw std::invalid_argument("granularity must divide the full cell count");
    }
    return {full_cells, G};
}

/// Granulated criterion: the model widths are in coarse cells. Identity:
/// genum_cost = enum_cost with E = G, plus log*(G) + n ln(E/G).
inline CostBreakdown genum_cost(const HistogramModel& m, long long n,
                                const GranularityContext& ctx) {
    const long long k = m.k();
    const long long G = ctx.granularity;
    double bin_index = 0.0;
    double log_mult = log_factorial(n);
    for (long long i = 0; i < k; ++i) {
        const double t = detail::cell_index_term(m.counts[static_cast<std::size_t>(i)],
                                                 m.width(i));
        if (t == kInfiniteCost) return CostBreakdown::infinite();
        bin_index += t;
        log_mult -= log_factorial(m.counts[static_cast<std::size_t>(i)]);
    }
    bin_index += static_cast<double>(n) * std::log(static_cast<double>(ctx.group_size()));
    const double index = log_star(k) + log_star(G) + log_binomial(G + k - 1, k - 1);
    const double multinomial = log_binomial(n + k - 1, k - 1) + log_mult;
    return CostBreakdown::sum(index, multinomial, bin_index);
}

/// ln R^n_K for K = 0..k_max via the two-term recurrence
///     R^n_{K+2} = R^n_{K+1} + (n / K) R^n_K,      R^n_1 = 1,
/// with R^n_2 summed explicitly over the binomial compositions. Runs in
/// O(n + k_max); kept in log space throughout.
inline std::vector<double> nml_log_complexity_table(long long n, long long k_max) {
    if (n < 0 || k_max < 1) throw std::invalid_argument("nml complexity: bad arguments");
    std::vector<double> r(static_cast<std::size_t>(k_max) + 1, 0.0);
    r[0] = 0.0;  // unused; K >= 1
    r[1] = 0.0;
    if (k_max == 1) return r;
    if (n == 0) return r;  // single empty composition for every K
    double sum2 = 0.0;
    const double log_n = std::log(static_cast<double>(n));
    for (long long h = 0; h <= n; ++h) {
        const double lh = h == 0 ? 0.0 : static_cast<double>(h) * (std::log(static_cast<double>(h)) - log_n);
        const long long j = n - h;
        const double lj = j == 0 ? 0.0 : static_cast<double>(j) * (std::log(static_cast<double>(j)) - log_n);
        sum2 += std::exp(log_binomial(n, h) + lh + lj);
    }
    r[2] = std::log(sum2);
    for (long long k = 1; k + 2 <= k_max; ++k) {
        const double a = r[static_cast<std::size_t>(k + 1)];
        const double b = std::log(static_cast<double>(n) / static_cast<double>(k)) +
                         r[static_cast<std::size_t>(k)];
        const double hi = std::max(a, b);
        r[static_cast<std::size_t>(k + 2)] = hi + std::log1p(std::exp(std::min(a, b) - hi));
    }
    return r;
}

/// ln R^n_K for a single (n, K).
inline double nml_parametric_complexity(long long n, long long K) {
    if (K < 1) throw std::invalid_argument("nml complexity: K must be >= 1");
    return nml_log_complexity_table(n, K)[static_cast<std::size_t>(K)];
}

/// NML criterion of a model against (n, E). More intervals than cells can
/// only arise through zero-width intervals, for which no endpoint choice
/// exists; such models score the sentinel.
inline CostBreakdown nml_cost(const HistogramModel& m, long long n, long long E) {
    const long long k = m.k();
    if (k - 1 > E) return CostBreakdown::infinite();
    double bin_index = 0.0;
    double log_lik = static_cast<double>(n) * std::log(static_cast<double>(n));
    for (long long i = 0; i < k; ++i) {
        const long long h = m.counts[static_cast<std::size_t>(i)];
        const double t = detail::cell_index_term(h, m.width(i));
        if (t == kInfiniteCost) return CostBreakdown::infinite();
        bin_index += t;
        if (h > 0) log_lik -= static_cast<double>(h) * std::log(static_cast<double>(h));
    }
    const double index = log_binomial(E, k - 1);
    const double multinomial = nml_parametric_complexity(n, k) + log_lik;
    return CostBreakdown::sum(index, multinomial, bin_index);
}

inline EnumCriterion make_enum_criterion(long long n, long long cells) {
    return EnumCriterion{n, cells};
}

/// NML criterion with its complexity table sized for every K a fit on a
/// k_max-cell lattice can reach.
inline NmlCriterion make_nml_criterion(long long n, long long cells, long long k_max) {
    NmlCriterion crit;
    crit.n = n;
    crit.total_cells = cells;
    crit.log_complexity = nml_log_complexity_table(n, std::max<long long>(k_max, 1) + 1);
    return crit;
}

inline CostBreakdown EnumCriterion::breakdown(const HistogramModel& m) const {
    return enum_cost(m, n, total_cells);
}

inline CostBreakdown NmlCriterion::breakdown(const HistogramModel& m) const {
    const long long k = m.k();
    double bin_index = 0.0;
    double log_lik = static_cast<double>(n) * std::log(static_cast<double>(n));
    for (long long i = 0; i < k; ++i) {
        const long long h = m.counts[static_cast<std::size_t>(i)];
        const double t = detail::cell_index_term(h, m.width(i));
        if (t == kInfiniteCost) return CostBreakdown::infinite();
        bin_index += t;
        if (h > 0) log_lik -= static_cast<double>(h) * std::log(static_cast<double>(h));
    }
    const double index = log_binomial(total_cells, k - 1);
    const double multinomial = log_complexity.at(static_cast<std::size_t>(k)) + log_lik;
    return CostBreakdown::sum(index, multinomial, bin_index);
}

/// Exact enumerative cost gap between the ideal two-interval histogram
/// (widths alpha*E and (1-alpha)*E, counts n*theta and n*(1-theta), theta
/// rounded to an integer count) and the single-interval histogram on the
/// same E-cell grid. Negative means two intervals win; the gap grows like
/// ln(E+1), which drives the transition thresholds as E increases.
inline double delta_two_vs_one(long long n, long long E, double alpha, double theta) {
    if (n < 1 || E < 1) throw std::invalid_argument("delta_two_vs_one: bad n or E");
    if (!(alpha > 0.0 && alpha < 1.0) || !(theta > 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("delta_two_vs_one: alpha in (0,1), theta in (0,1]");
    }
    const long long h1 = std::llround(static_cast<double>(n) * theta);
    const long long h2 = n - h1;
    // The n ln E cell terms cancel between the two models.
    return log_star(2) - log_star(1) + std::log(static_cast<double>(E) + 1.0) +
           std::log(static_cast<double>(n) + 1.0) + log_binomial(n, h1) +
           static_cast<double>(h1) * std::log(alpha) +
           static_cast<double>(h2) * std::log1p(-alpha);
}

}  // namespace mdlhist
