// Acceptance suite: one line per criterion, PASS/FAIL, with the measured
// numbers. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mdlhist/mdlhist.hpp"

using namespace mdlhist;

namespace {

int g_failures = 0;

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %s :: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

Dataset random_instance(SplitMix64& rng, long long max_n) {
    const long long n =
        1 + static_cast<long long>(rng.next_u64() % static_cast<unsigned long long>(max_n));
    std::vector<double> v;
    double x = rng.uniform01() * 10.0;
    while (static_cast<long long>(v.size()) < n) {
        if (rng.uniform01() < 0.3 && !v.empty()) {
            v.push_back(v.back());
        } else {
            x += rng.uniform01() * 2.0;
            v.push_back(x);
        }
    }
    return make_dataset(std::move(v));
}

// --------------------------------------------------------------------------
// 1. Two-interval -> one-interval transition thresholds (exact, deterministic)
// --------------------------------------------------------------------------
void check_transition_thresholds() {
    Timer t;
    const std::vector<std::pair<long long, long long>> expected = {
        {10, 30}, {12, 80}, {16, 530}, {20, 3700}};
    bool ok = true;
    std::string detail;
    for (const auto& [n, e_ref] : expected) {
        // first E with delta >= 0, by doubling then bisection
        long long hi = 1;
        while (delta_two_vs_one(n, hi, 0.1, 0.5) < 0.0) hi *= 2;
        long long lo = hi / 2;
        while (lo + 1 < hi) {
            const long long mid = lo + (hi - lo) / 2;
            (delta_two_vs_one(n, mid, 0.1, 0.5) < 0.0 ? lo : hi) = mid;
        }
        const double ratio = static_cast<double>(e_ref) / static_cast<double>(hi);
        const bool in_bracket = ratio <= 1.1 && ratio >= 1.0 / 1.1;
        ok = ok && in_bracket;
        detail += "n=" + std::to_string(n) + ":E*=" + std::to_string(hi) + " ";
    }
    const double sec = t.seconds();
    ok = ok && sec < 1.0;
    report("transition-thresholds", ok,
           detail + "(expected 30/80/530/3700, runtime " + std::to_string(sec) + "s)");
}

// --------------------------------------------------------------------------
// 2. NML parametric complexity vs the brute-force composition sum
// --------------------------------------------------------------------------
double brute_force_complexity(long long n, long long k) {
    std::vector<long long> h(static_cast<std::size_t>(k), 0);
    double total = 0.0;
    const double log_n = std::log(static_cast<double>(n));
    const std::function<void(std::size_t, long long)> rec = [&](std::size_t idx, long long left) {
        if (idx + 1 == h.size()) {
            h[idx] = left;
            double lt = log_factorial(n);
            for (const long long hi : h) {
                lt -= log_factorial(hi);
                if (hi > 0) {
                    lt += static_cast<double>(hi) * (std::log(static_cast<double>(hi)) - log_n);
                }
            }
            total += std::exp(lt);
            return;
        }
        for (long long v = 0; v <= left; ++v) {
            h[idx] = v;
            rec(idx + 1, left - v);
        }
    };
    rec(0, n);
    return std::log(total);
}

void check_nml_oracle() {
    Timer t;
    double worst = 0.0;
    for (long long n = 1; n <= 12; ++n) {
        const auto table = nml_log_complexity_table(n, 5);
        for (long long k = 1; k <= 5; ++k) {
            const double oracle = brute_force_complexity(n, k);
            const double err = std::abs(table[static_cast<std::size_t>(k)] - oracle) /
                               std::max(1.0, std::abs(oracle));
            worst = std::max(worst, err);
        }
    }
    const double sec = t.seconds();
    const bool ok = worst <= 1e-9 && sec < 1.0;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "worst relative error %.3e, runtime %.3fs", worst, sec);
    report("nml-complexity-oracle", ok, buf);
}

// --------------------------------------------------------------------------
// 3. Structural properties of exact optima on 500 random instances
// --------------------------------------------------------------------------
void check_structural_properties() {
    Timer t;
    SplitMix64 rng(20240817);
    long long viol_zero_width = 0, viol_adjacent_empty = 0, viol_kbound = 0, viol_endpoint = 0;
    for (int rep = 0; rep < 500; ++rep) {
        const Dataset d = random_instance(rng, 50);
        const long long e = 1 + static_cast<long long>(rng.next_u64() % 64ULL);
        const GridSpec g = build_grid_by_E(d, e);
        const BinnedData bd = bin_data(d, g);
        const Lattice lat = full_lattice(bd, g.cells);
        const EnumCriterion crit{d.n(), g.cells};
        const FitResult o =
            dp_optimal_lattice(lat, g, crit, default_k_max(d.n(), lat.cell_count()));
        const auto& m = o.model;
        for (long long k = 0; k < m.k(); ++k) {
            if (m.width(k) <= 0) ++viol_zero_width;
        }
        for (long long k = 0; k + 1 < m.k(); ++k) {
            if (m.counts[static_cast<std::size_t>(k)] == 0 &&
                m.counts[static_cast<std::size_t>(k) + 1] == 0) {
                ++viol_adjacent_empty;
            }
        }
        if (m.k() > std::max<long long>(1, 2 * d.n() - 2)) ++viol_kbound;
        for (const long long cut : m.cuts) {
            const double pos = g.edge(cut);
            double nearest = 1e300;
            for (const double x : d.values) nearest = std::min(nearest, std::abs(pos - x));
            if (nearest > g.epsilon + 1e-9) ++viol_endpoint;
        }
    }
    const double sec = t.seconds();
    const bool ok = viol_zero_width + viol_adjacent_empty + viol_kbound + viol_endpoint == 0 &&
                    sec < 30.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "violations: zero-width=%lld adjacent-empty=%lld k-bound=%lld endpoint=%lld, "
                  "runtime %.2fs",
                  viol_zero_width, viol_adjacent_empty, viol_kbound, viol_endpoint, sec);
    report("structural-properties-500", ok, buf);
}

// --------------------------------------------------------------------------
// 4. Constructive orderings and exact winners on the crafted datasets
// --------------------------------------------------------------------------
void check_constructive_cases() {
    bool ok = true;
    std::string detail;

    // 20 distinct spread values on an E=100 grid
    {
        std::vector<double> v;
        for (int i = 0; i < 20; ++i) v.push_back(static_cast<double>(i) * (5.0 / 19.0));
        const Dataset d = make_dataset(std::move(v));
        const GridSpec g = build_grid_by_E(d, 100);
        const BinnedData bd = bin_data(d, g);

        const HistogramModel k1{{0, g.cells}, {20}};
        // one interval per observation (K = n)
        HistogramModel singletons;
        singletons.cuts.push_back(0);
        for (const auto& b : bd.bins) singletons.cuts.push_back(b.index);
        for (int i = 0; i < 20; ++i) singletons.counts.push_back(1);
        // singleton cells separated by empty intervals (K = 2n - 1)
        HistogramModel alternating;
        alternating.cuts.push_back(0);
        for (const auto& b : bd.bins) {
            if (b.index - 1 > alternating.cuts.back()) {
                alternating.cuts.push_back(b.index - 1);
                alternating.counts.push_back(0);
            }
            alternating.cuts.push_back(b.index);
            alternating.counts.push_back(b.count);
        }
        const double c1 = enum_cost(k1, 20, 100).total;
        const double cs = enum_cost(singletons, 20, 100).total;
        const double ca = enum_cost(alternating, 20, 100).total;
        const bool sub = c1 < cs && c1 < ca && compatible(singletons, bd) &&
                         compatible(alternating, bd) && singletons.k() == 20 &&
                         alternating.k() == 39;
        ok = ok && sub;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "K1=%.2f < singletons=%.2f, alternating=%.2f; ", c1, cs,
                      ca);
        detail += buf;
    }
    // singleton isolation: dp winner is K=2 with the cut next to the heavy value
    {
        std::vector<double> v{0.0};
        for (int i = 0; i < 19; ++i) v.push_back(10.0);
        const Dataset d = make_dataset(std::move(v));
        const GridSpec g = build_grid_by_E(d, 100);
        const BinnedData bd = bin_data(d, g);
        const EnumCriterion crit{20, 100};
        const FitResult o = dp_optimal(bd, g, crit);
        const bool sub = o.model.k() == 2 && o.model.cuts == std::vector<long long>{0, 99, 100};
        ok = ok && sub;
        detail += std::string("singleton-isolation K*=") + std::to_string(o.model.k()) + "; ";
    }
    // empty middle: dp winner is K=3 with a maximal empty middle
    {
        std::vector<double> v;
        for (int i = 0; i < 10; ++i) v.push_back(0.0);
        for (int i = 0; i < 10; ++i) v.push_back(10.0);
        const Dataset d = make_dataset(std::move(v));
        const GridSpec g = build_grid_by_E(d, 100);
        const BinnedData bd = bin_data(d, g);
        const EnumCriterion crit{20, 100};
        const FitResult o = dp_optimal(bd, g, crit);
        const bool sub =
            o.model.k() == 3 && o.model.cuts == std::vector<long long>{0, 1, 99, 100} &&
            o.model.counts == std::vector<long long>{10, 0, 10};
        ok = ok && sub;
        detail += std::string("empty-middle K*=") + std::to_string(o.model.k());
    }
    report("constructive-winners", ok, detail);
}

// --------------------------------------------------------------------------
// 5. Collapse to a single interval as the grid refines (distinct values)
// --------------------------------------------------------------------------
void check_refinement_collapse() {
    std::vector<double> v;
    SplitMix64 rng(7777);
    double x = 0.0;
    for (int i = 0; i < 20; ++i) {
        x += 0.5 + rng.uniform01();
        v.push_back(x);
    }
    const Dataset d = make_dataset(std::move(v));
    long long threshold = -1;
    long long k_at_max = -1;
    for (long long e = 64; e <= (1LL << 24); e *= 2) {
        const GridSpec g = build_grid_by_E(d, e);
        const BinnedData bd = bin_data(d, g);
        const Lattice lat = candidate_lattice(bd, g);
        const EnumCriterion crit{d.n(), g.cells};
        const FitResult o =
            dp_optimal_lattice(lat, g, crit, default_k_max(d.n(), lat.cell_count()));
        if (o.model.k() == 1 && threshold < 0) threshold = e;
        if (e == (1LL << 24)) k_at_max = o.model.k();
    }
    const bool ok = threshold > 0 && k_at_max == 1;
    report("refinement-collapse-to-one", ok,
           "first K*=1 at E=" + std::to_string(threshold) + ", K*(2^24)=" +
               std::to_string(k_at_max));
}

// --------------------------------------------------------------------------
// 6. Greedy + post-optimization against the exact optimum
// --------------------------------------------------------------------------
void check_greedy_vs_exact() {
    Timer t;
    SplitMix64 rng(424242);
    int attained = 0;
    double worst_gap = 0.0;
    const int reps = 200;
    for (int rep = 0; rep < reps; ++rep) {
        const Dataset d = random_instance(rng, 50);
        const long long e = 1 + static_cast<long long>(rng.next_u64() % 64ULL);
        const GridSpec g = build_grid_by_E(d, e);
        const BinnedData bd = bin_data(d, g);
        const Lattice lat = full_lattice(bd, g.cells);
        const EnumCriterion crit{d.n(), g.cells};
        const FitResult greedy = greedy_fit_lattice(lat, g, crit);
        const FitResult exact =
            dp_optimal_lattice(lat, g, crit, default_k_max(d.n(), lat.cell_count()));
        const double gap = greedy.cost.total - exact.cost.total;
        worst_gap = std::max(worst_gap, gap);
        if (gap <= 1e-9) ++attained;
    }
    const bool ok = attained >= reps * 9 / 10 && worst_gap <= 2.0;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "attained %d/%d, worst gap %.4f nats, runtime %.2fs",
                  attained, reps, worst_gap, t.seconds());
    report("greedy-vs-exact-200", ok, buf);
}

// --------------------------------------------------------------------------
// 7. Incremental deltas along a random merge sequence at n = 10^4
// --------------------------------------------------------------------------
void check_incremental_consistency() {
    const Dataset d = ReferenceDensity::normal().sample(10000, 31415);
    const GridSpec g = build_grid(d, 0.01);
    const BinnedData bd = bin_data(d, g);
    const Lattice lat = candidate_lattice(bd, g);
    const EnumCriterion crit{d.n(), g.cells};

    SplitMix64 rng(161803);
    std::vector<long long> h, w;
    for (long long i = 0; i < lat.cell_count(); ++i) {
        h.push_back(lat.count(i, i + 1));
        w.push_back(lat.width(i, i + 1));
    }
    double acc = crit.q1(static_cast<long long>(h.size()));
    for (std::size_t i = 0; i < h.size(); ++i) acc += crit.q2(h[i], w[i]);

    double worst = 0.0;
    while (h.size() > 1) {
        const std::size_t pos = static_cast<std::size_t>(rng.next_u64() % (h.size() - 1));
        acc += crit.merge_delta(h[pos], w[pos], h[pos + 1], w[pos + 1],
                                static_cast<long long>(h.size()));
        h[pos] += h[pos + 1];
        w[pos] += w[pos + 1];
        h.erase(h.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
        if (h.size() % 500 == 0 || h.size() == 1) {
            double fresh = crit.q1(static_cast<long long>(h.size()));
            for (std::size_t i = 0; i < h.size(); ++i) fresh += crit.q2(h[i], w[i]);
            worst = std::max(worst, std::abs(acc - fresh));
        }
    }
    const bool ok = worst <= 1e-8;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst |accumulated - fresh| = %.3e", worst);
    report("incremental-delta-consistency", ok, buf);
}

// --------------------------------------------------------------------------
// 8. Stochastic reproduction of the benchmark anchors (10 seeds, n = 10^4)
// --------------------------------------------------------------------------
void check_stochastic_tables() {
    Timer t;
    struct Row {
        const char* name;
        double hd_lo, hd_hi;
        double k_lo, k_hi;
    };
    const std::vector<Row> rows = {{"normal", 0.035, 0.055, 14.0, 19.0},
                                   {"uniform", 0.015, 0.035, 1.0, 1.0},
                                   {"claw", 0.047, 0.067, 25.0, 33.0}};
    bool ok = true;
    std::string detail;
    for (const auto& row : rows) {
        const ReferenceDensity ref = ReferenceDensity::by_name(row.name);
        double hd_sum = 0.0, k_sum = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const Dataset d = ref.sample(
                10000, mix_seed(seed, label_hash(row.name), 10000));
            const FitResult fit = genum_fit(d);
            hd_sum += hellinger(ref, HistogramDensity(fit.model, fit.grid));
            k_sum += static_cast<double>(fit.model.k());
        }
        const double hd = hd_sum / 10.0, k = k_sum / 10.0;
        const bool sub = hd >= row.hd_lo && hd <= row.hd_hi && k >= row.k_lo && k <= row.k_hi;
        ok = ok && sub;
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s: HD=%.4f (in [%.3f,%.3f]) K=%.2f (in [%g,%g])%s; ",
                      row.name, hd, row.hd_lo, row.hd_hi, k, row.k_lo, row.k_hi,
                      sub ? "" : " <-");
        detail += buf;
    }
    const double sec = t.seconds();
    ok = ok && sec < 300.0;
    report("benchmark-anchors", ok, detail + "runtime " + std::to_string(sec) + "s");
}

// --------------------------------------------------------------------------
// 9. Scalability: linearithmic granulated fit up to 10^6 points
// --------------------------------------------------------------------------
void check_scalability() {
    const ReferenceDensity normal = ReferenceDensity::normal();
    const Dataset d5 = normal.sample(100000, 555001);
    Timer t5;
    const FitResult f5 = genum_fit(d5);
    const double sec5 = t5.seconds();

    const Dataset d6 = normal.sample(1000000, 555002);
    Timer t6;
    const FitResult f6 = genum_fit(d6);
    const double sec6 = t6.seconds();

    const double nlogn_ratio = (1e6 * std::log(1e6)) / (1e5 * std::log(1e5));
    const bool ok = sec6 < 10.0 && sec6 / sec5 <= 1.3 * nlogn_ratio;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "t(1e5)=%.2fs K=%lld, t(1e6)=%.2fs K=%lld, ratio %.2f (limit %.2f)", sec5,
                  f5.model.k(), sec6, f6.model.k(), sec6 / sec5, 1.3 * nlogn_ratio);
    report("scalability-1e6", ok, buf);
}

// --------------------------------------------------------------------------
// 10. Hellinger oracles
// --------------------------------------------------------------------------
void check_hellinger_oracle() {
    bool ok = true;
    std::string detail;

    const HistogramDensity u1({0.0, 1.0}, {1.0});
    const HistogramDensity u2({0.0, 2.0}, {0.5});
    const double h12 = hellinger(u1, u2);
    ok = ok && std::abs(h12 - 0.54120) <= 1e-5;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "H(U01,U02)=%.7f; ", h12);
    detail += buf;

    double worst_self = 0.0;
    for (const auto& name : ReferenceDensity::all_names()) {
        const ReferenceDensity d = ReferenceDensity::by_name(name);
        worst_self = std::max(worst_self, hellinger(d, d));
    }
    ok = ok && worst_self <= 1e-7;
    std::snprintf(buf, sizeof(buf), "worst H(p,p)=%.2e; ", worst_self);
    detail += buf;

    // K=4096 equal-width proxy of the uniform density
    {
        const ReferenceDensity uni = ReferenceDensity::uniform();
        const int k = 4096;
        std::vector<double> edges(static_cast<std::size_t>(k) + 1), dens(static_cast<std::size_t>(k));
        for (int i = 0; i <= k; ++i) {
            edges[static_cast<std::size_t>(i)] = static_cast<double>(i) / k;
        }
        for (int i = 0; i < k; ++i) {
            const double mass = uni.cdf(edges[static_cast<std::size_t>(i) + 1]) -
                                uni.cdf(edges[static_cast<std::size_t>(i)]);
            dens[static_cast<std::size_t>(i)] = mass * k;
        }
        const double hp = hellinger(uni, HistogramDensity(edges, dens));
        ok = ok && hp < 0.01;
        std::snprintf(buf, sizeof(buf), "H(uniform, proxy4096)=%.2e", hp);
        detail += buf;
    }
    report("hellinger-oracle", ok, detail);
}

}  // namespace

int main() {
    std::printf("acceptance suite\n================\n");
    check_transition_thresholds();
    check_nml_oracle();
    check_structural_properties();
    check_constructive_cases();
    check_refinement_collapse();
    check_greedy_vs_exact();
    check_incremental_consistency();
    check_stochastic_tables();
    check_scalability();
    check_hellinger_oracle();
    std::printf("================\n%d criterion(s) failed\n", g_failures);
    return g_failures;
}
