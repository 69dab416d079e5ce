#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "mdlhist/densities.hpp"
#include "mdlhist/hellinger.hpp"
#include "mdlhist/search.hpp"

namespace mdlhist {

/// One benchmark cell result. CSV column order is fixed:
/// distribution,n,seed,method,k,seconds,hellinger
struct BenchmarkRecord {
    std::string distribution;
    long long n = 0;
    std::uint64_t seed = 0;
    std::string method;
    long long k = 0;
    double seconds = 0.0;
    double hellinger = 0.0;
    bool failed = false;
    std::string error;
};

struct BenchmarkSpec {
    std::vector<std::string> distributions;
    std::vector<long long> sizes;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> methods;  // genum | enum-greedy | enum-dp | nml-greedy | nml-dp
    double epsilon = 0.01;             // grid accuracy for the enum/nml methods
    std::string output;                // records CSV path ("" = stdout only)
};

inline const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> m = {"genum", "enum-greedy", "enum-dp", "nml-greedy",
                                               "nml-dp"};
    return m;
}

namespace detail {

inline std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        const auto t = trim(item);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

}  // namespace detail

/// key = value configuration. Keys: distributions, sizes, seeds, methods,
/// epsilon, output. `seeds` is either a count N (meaning 0..N-1) or an
/// explicit comma list. Lines starting with '#' are comments.
inline BenchmarkSpec parse_benchmark_config(std::istream& in) {
    BenchmarkSpec spec;
    spec.distributions = ReferenceDensity::all_names();
    spec.sizes = {10000};
    spec.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    spec.methods = {"genum"};

    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string value(detail::trim(line.substr(eq + 1)));
        if (key.empty()) continue;
        if (key == "distributions") {
            spec.distributions = detail::split_csv_list(value);
        } else if (key == "sizes") {
            spec.sizes.clear();
            for (const auto& v : detail::split_csv_list(value)) spec.sizes.push_back(std::stoll(v));
        } else if (key == "seeds") {
            spec.seeds.clear();
            const auto items = detail::split_csv_list(value);
            if (items.size() == 1 && value.find(',') == std::string::npos) {
                const long long count = std::stoll(items[0]);
                for (long long s = 0; s < count; ++s) {
                    spec.seeds.push_back(static_cast<std::uint64_t>(s));
                }
            } else {
                for (const auto& v : items) spec.seeds.push_back(std::stoull(v));
            }
        } else if (key == "methods") {
            spec.methods = detail::split_csv_list(value);
        } else if (key == "epsilon") {
            spec.epsilon = std::stod(value);
        } else if (key == "output") {
            spec.output = value;
        } else {
            throw std::invalid_argument("benchmark config: unknown key '" + key + "'");
        }
    }
    return spec;
}

inline BenchmarkSpec parse_benchmark_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open benchmark config: " + path);
    return parse_benchmark_config(in);
}

/// Runs one cell: sample, fit, score against the true pdf. The sample
/// depends only on (distribution, n, seed), never on the method, so methods
/// see identical data.
inline BenchmarkRecord run_benchmark_cell(const std::string& distribution, long long n,
                                          std::uint64_t seed, const std::string& method,
                                          double epsilon) {
    BenchmarkRecord rec;
    rec.distribution = distribution;
    rec.n = n;
    rec.seed = seed;
    rec.method = method;
    try {
        const ReferenceDensity ref = ReferenceDensity::by_name(distribution);
        const Dataset data =
            ref.sample(n, mix_seed(seed, label_hash(distribution),
                                   static_cast<std::uint64_t>(n)));
        FitResult fit;
        if (method == "genum") {
            fit = genum_fit(data);
        } else {
            const GridSpec grid = build_grid(data, epsilon);
            const BinnedData bd = bin_data(data, grid);
            const FitOptions opt;
            const Lattice lat = make_lattice(bd, grid, opt);
            if (method == "enum-greedy" || method == "enum-dp") {
                const EnumCriterion crit{data.n(), grid.cells};
                fit = method == "enum-greedy"
                          ? greedy_fit_lattice(lat, grid, crit, opt)
                          : dp_optimal_lattice(lat, grid, crit,
                                               default_k_max(data.n(), lat.cell_count()));
            } else if (method == "nml-greedy" || method == "nml-dp") {
                const NmlCriterion crit =
                    make_nml_criterion(data.n(), grid.cells, lat.cell_count());
                fit = method == "nml-greedy"
                          ? greedy_fit_lattice(lat, grid, crit, opt)
                          : dp_optimal_lattice(lat, grid, crit,
                                               default_k_max(data.n(), lat.cell_count()));
            } else {
                throw std::invalid_argument("unknown method: " + method);
            }
        }
        rec.k = fit.model.k();
        rec.seconds = fit.wall_seconds;
        rec.hellinger = hellinger(ref, HistogramDensity(fit.model, fit.grid));
    } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
    }
    return rec;
}

/// All cells of the spec, in deterministic (distribution, n, seed, method)
/// order. Cells run concurrently when HIST_THREADS > 1; failures are
/// recorded per cell and the run continues.
inline std::vector<BenchmarkRecord> run_benchmark(const BenchmarkSpec& spec) {
    if (spec.methods.empty()) throw std::invalid_argument("benchmark: no methods given");
    if (spec.distributions.empty()) throw std::invalid_argument("benchmark: no distributions");
    for (const auto& m : spec.methods) {
        if (std::find(known_methods().begin(), known_methods().end(), m) ==
            known_methods().end()) {
            throw std::invalid_argument("benchmark: unknown method '" + m + "'");
        }
    }

    struct Cell {
        std::string distribution;
        long long n;
        std::uint64_t seed;
        std::string method;
    };
    std::vector<Cell> cells;
    for (const auto& d : spec.distributions) {
        for (const long long n : spec.sizes) {
            for (const auto seed : spec.seeds) {
                for (const auto& m : spec.methods) cells.push_back({d, n, seed, m});
            }
        }
    }

    int threads = 1;
    if (const char* env = std::getenv("HIST_THREADS")) {
        threads = std::max(1, std::atoi(env));
    }
    threads = std::min<int>(threads, static_cast<int>(cells.size()));

    std::vector<BenchmarkRecord> records(cells.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto& c = cells[i];
            records[i] = run_benchmark_cell(c.distribution, c.n, c.seed, c.method, spec.epsilon);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
                    const auto& c = cells[i];
                    records[i] =
                        run_benchmark_cell(c.distribution, c.n, c.seed, c.method, spec.epsilon);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return records;
}

inline void write_records_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records) {
    out << "distribution,n,seed,method,k,seconds,hellinger\n";
    for (const auto& r : records) {
        out << r.distribution << "," << r.n << "," << r.seed << "," << r.method << ",";
        if (r.failed) {
            out << ",,\n";
        } else {
            out << r.k << "," << std::setprecision(6) << r.seconds << ","
                << std::setprecision(9) << r.hellinger << "\n";
        }
    }
}

struct Aggregate {
    double hd_mean = 0.0, hd_std = 0.0;
    double k_mean = 0.0, k_std = 0.0;
    double sec_mean = 0.0;
    long long cells = 0, failures = 0;
};

/// Mean/std per (distribution, n, method), over seeds.
inline std::map<std::tuple<std::string, long long, std::string>, Aggregate> aggregate_records(
    const std::vector<BenchmarkRecord>& records) {
    std::map<std::tuple<std::string, long long, std::string>, std::vector<const BenchmarkRecord*>>
        groups;
    for (const auto& r : records) {
        groups[{r.distribution, r.n, r.method}].push_back(&r);
    }
    std::map<std::tuple<std::string, long long, std::string>, Aggregate> out;
    for (const auto& [key, rs] : groups) {
        Aggregate a;
        a.cells = static_cast<long long>(rs.size());
        std::vector<double> hds, ks;
        for (const auto* r : rs) {
            if (r->failed) {
                ++a.failures;
                continue;
            }
            hds.push_back(r->hellinger);
            ks.push_back(static_cast<double>(r->k));
            a.sec_mean += r->seconds;
        }
        const auto mean_std = [](const std::vector<double>& v, double& mean, double& sd) {
            if (v.empty()) return;
            mean = 0.0;
            for (const double x : v) mean += x;
            mean /= static_cast<double>(v.size());
            sd = 0.0;
            for (const double x : v) sd += (x - mean) * (x - mean);
            sd = std::sqrt(sd / static_cast<double>(v.size()));
        };
        mean_std(hds, a.hd_mean, a.hd_std);
        mean_std(ks, a.k_mean, a.k_std);
        if (!hds.empty()) a.sec_mean /= static_cast<double>(hds.size());
        out[key] = a;
    }
    return out;
}

/// Aligned summary: one block per sample size, distributions as rows and
/// methods as columns, cells formatted mean +- std.
inline void write_summary(std::ostream& out, const std::vector<BenchmarkRecord>& records) {
    const auto agg = aggregate_records(records);
    std::vector<long long> sizes;
    std::vector<std::string> dists, methods;
    for (const auto& [key, a] : agg) {
        const auto& [d, n, m] = key;
        if (std::find(sizes.begin(), sizes.end(), n) == sizes.end()) sizes.push_back(n);
        if (std::find(dists.begin(), dists.end(), d) == dists.end()) dists.push_back(d);
        if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);
    }
    std::sort(sizes.begin(), sizes.end());

    const auto cell = [&](const std::string& d, long long n, const std::string& m,
                          bool k_table) -> std::string {
        const auto it = agg.find({d, n, m});
        if (it == agg.end()) return "-";
        if (it->second.failures == it->second.cells) return "failed";
        std::ostringstream s;
        s << std::fixed << std::setprecision(k_table ? 2 : 3)
          << (k_table ? it->second.k_mean : it->second.hd_mean) << " +- "
          << (k_table ? it->second.k_std : it->second.hd_std);
        return s.str();
    };

    for (const long long n : sizes) {
        for (const bool k_table : {false, true}) {
            out << (k_table ? "Interval counts" : "Hellinger distance") << ", n=" << n << "\n";
            out << std::left << std::setw(18) << "distribution";
            for (const auto& m : methods) out << std::setw(18) << m;
            out << "\n";
            for (const auto& d : dists) {
                out << std::setw(18) << d;
                for (const auto& m : methods) out << std::setw(18) << cell(d, n, m, k_table);
                out << "\n";
            }
            out << "\n";
        }
    }
}

}  // namespace mdlhist
