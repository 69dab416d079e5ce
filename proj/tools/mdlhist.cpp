// mdlhist: MDL-optimal irregular histograms from the command line.
//
// Subcommands:
//   fit        fit a histogram to a CSV/TSV column, write an artifact
//   benchmark  run the synthetic benchmark harness from a config file
//   eval       Hellinger distance of an artifact against a named density
//              or another artifact
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 budget exceeded.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mdlhist/mdlhist.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitBudget = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int cmd_fit(const std::string& input, const std::string& column, const std::string& method,
            double epsilon, long long grid_bins, const std::string& solver,
            const std::string& output, const std::string& plot_out) {
    using namespace mdlhist;
    if (method != "enum" && method != "genum" && method != "nml") {
        throw UsageError("unknown method: " + method);
    }
    if (solver != "greedy" && solver != "dp") {
        throw UsageError("unknown solver: " + solver);
    }
    const bool has_eps = epsilon > 0.0;
    const bool has_bins = grid_bins > 0;
    if (method == "genum") {
        if (has_eps || has_bins) {
            std::cerr << "note: --epsilon/--grid-bins are ignored by genum (grid is 2^30 cells)\n";
        }
        if (solver == "dp") throw UsageError("genum uses the granularity loop, not a dp solver");
    } else {
        if (has_eps == has_bins) {
            throw UsageError("method '" + method + "' needs exactly one of --epsilon/--grid-bins");
        }
    }

    const Dataset data = load_dataset(input, column);
    if (data.skipped_rows > 0) {
        std::cerr << "warning: skipped " << data.skipped_rows << " unparseable rows\n";
    }

    FitResult fit;
    if (method == "genum") {
        fit = genum_fit(data);
    } else {
        const GridSpec grid = has_eps ? build_grid(data, epsilon) : build_grid_by_E(data, grid_bins);
        const BinnedData bd = bin_data(data, grid);
        const FitOptions opt;
        const Lattice lat = make_lattice(bd, grid, opt);
        if (method == "enum") {
            const EnumCriterion crit{data.n(), grid.cells};
            fit = solver == "greedy"
                      ? greedy_fit_lattice(lat, grid, crit, opt)
                      : dp_optimal_lattice(lat, grid, crit, default_k_max(data.n(), lat.cell_count()));
        } else {
            const NmlCriterion crit = make_nml_criterion(data.n(), grid.cells, lat.cell_count());
            fit = solver == "greedy"
                      ? greedy_fit_lattice(lat, grid, crit, opt)
                      : dp_optimal_lattice(lat, grid, crit, default_k_max(data.n(), lat.cell_count()));
        }
    }

    const HistogramArtifact artifact = make_artifact(method, fit, data.n());
    if (output.empty()) {
        write_artifact(std::cout, artifact);
    } else {
        write_artifact(output, artifact);
    }
    if (!plot_out.empty()) {
        std::ofstream plot(plot_out);
        if (!plot) throw mdlhist::DataError("cannot write plot file: " + plot_out);
        write_plot(plot, artifact);
    }
    std::cerr << "fit: method=" << method << " n=" << data.n() << " K=" << artifact.k()
              << " cost=" << artifact.cost_nats << " nats"
              << (artifact.granularity > 0 ? " G=" + std::to_string(artifact.granularity) : "")
              << " wall=" << artifact.wall_seconds << "s\n";
    return kExitOk;
}

int cmd_benchmark(const std::string& config_path, const std::string& output_override,
                  std::uint64_t seed_offset) {
    using namespace mdlhist;
    BenchmarkSpec spec;
    if (config_path.empty()) {
        std::istringstream empty;
        spec = parse_benchmark_config(empty);  // defaults
    } else {
        spec = parse_benchmark_config(config_path);
    }
    if (!output_override.empty()) spec.output = output_override;
    if (seed_offset != 0) {
        for (auto& s : spec.seeds) s += seed_offset;
    }
    const auto records = run_benchmark(spec);
    if (!spec.output.empty()) {
        std::ofstream out(spec.output);
        if (!out) throw DataError("cannot write records: " + spec.output);
        write_records_csv(out, records);
    } else {
        write_records_csv(std::cout, records);
    }
    write_summary(std::cerr, records);
    long long failures = 0;
    for (const auto& r : records) {
        if (r.failed) {
            ++failures;
            std::cerr << "cell failed: " << r.distribution << " n=" << r.n << " seed=" << r.seed
                      << " method=" << r.method << ": " << r.error << "\n";
        }
    }
    std::cerr << "benchmark: " << records.size() << " cells, " << failures << " failures\n";
    return kExitOk;
}

int cmd_eval(const std::string& artifact_path, const std::string& reference) {
    using namespace mdlhist;
    const HistogramArtifact a = read_artifact(artifact_path);
    const HistogramDensity qa = artifact_density(a);
    double hd = 0.0;
    std::ifstream probe(reference);
    if (probe.good()) {
        const HistogramArtifact b = read_artifact(reference);
        hd = hellinger(artifact_density(b), qa);
    } else {
        const ReferenceDensity ref = ReferenceDensity::by_name(reference);
        hd = hellinger(ref, qa);
    }
    std::printf("%.9f\n", hd);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MDL-optimal irregular histograms"};
    app.require_subcommand(1);

    // fit
    auto* fit = app.add_subcommand("fit", "fit a histogram to a file column");
    std::string input, column = "0", method = "genum", solver = "greedy", output, plot_out;
    double epsilon = 0.0;
    long long grid_bins = 0;
    fit->add_option("--input", input, "CSV/TSV input file")->required();
    fit->add_option("--column", column, "column name or 0-based index (default 0)");
    fit->add_option("--method", method, "enum | genum | nml");
    fit->add_option("--epsilon", epsilon, "grid accuracy (enum/nml)");
    fit->add_option("--grid-bins", grid_bins, "grid cell count E (enum/nml)");
    fit->add_option("--solver", solver, "greedy | dp");
    fit->add_option("--output", output, "artifact path (default stdout)");
    fit->add_option("--plot-out", plot_out, "two-column (x density) staircase file");

    // benchmark
    auto* bench = app.add_subcommand("benchmark", "run the synthetic benchmark harness");
    std::string config, bench_output;
    std::uint64_t seed = 0;
    bench->add_option("--config", config, "key = value config file");
    bench->add_option("--output", bench_output, "records CSV path (overrides config)");
    bench->add_option("--seed", seed, "offset added to every configured seed");

    // eval
    auto* eval = app.add_subcommand("eval", "Hellinger distance of an artifact");
    std::string artifact_path, reference;
    eval->add_option("artifact", artifact_path, "fitted artifact path")->required();
    eval->add_option("reference", reference,
                     "named density (normal|cauchy|uniform|triangle|triangle-mixture|claw) "
                     "or a second artifact")
        ->required();

    try {
        app.parse(argc, argv);
        if (fit->parsed()) {
            return cmd_fit(input, column, method, epsilon, grid_bins, solver, output, plot_out);
        }
        if (bench->parsed()) return cmd_benchmark(config, bench_output, seed);
        if (eval->parsed()) return cmd_eval(artifact_path, reference);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const mdlhist::BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const mdlhist::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
