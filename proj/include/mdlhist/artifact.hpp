#pragma once

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdlhist/hellinger.hpp"
#include "mdlhist/search.hpp"

namespace mdlhist {

/// Fitted histogram in data coordinates, as written to disk. Line-oriented
/// versioned text with a fixed field order; doubles use 17 significant
/// digits so a round trip reproduces them bit for bit.
struct HistogramArtifact {
    static constexpr const char* kVersionLine = "mdlhist-artifact v1";

    struct Interval {
        double left = 0.0;
        double right = 0.0;
        long long count = 0;
        double density = 0.0;
    };

    std::string method;          // enum | genum | nml
    long long n = 0;
    double epsilon = 0.0;        // accuracy actually used
    long long grid_bins = 0;     // E of the underlying grid
    long long granularity = 0;   // G (genum only; 0 otherwise)
    double cost_nats = 0.0;
    double wall_seconds = 0.0;
    std::vector<Interval> intervals;

    long long k() const { return static_cast<long long>(intervals.size()); }
};

inline HistogramArtifact make_artifact(const std::string& method, const FitResult& fit,
                                       long long n) {
    HistogramArtifact a;
    a.method = method;
    a.n = n;
    a.epsilon = fit.grid.epsilon;
    a.grid_bins = fit.granularity > 0 ? kDefaultFullGridCells : fit.grid.cells;
    a.granularity = fit.granularity;
    a.cost_nats = fit.cost.total;
    a.wall_seconds = fit.wall_seconds;
    const double nn = static_cast<double>(n);
    for (long long i = 0; i < fit.model.k(); ++i) {
        HistogramArtifact::Interval iv;
        iv.left = fit.grid.edge(fit.model.cuts[static_cast<std::size_t>(i)]);
        iv.right = fit.grid.edge(fit.model.cuts[static_cast<std::size_t>(i) + 1]);
        iv.count = fit.model.counts[static_cast<std::size_t>(i)];
        iv.density = iv.right > iv.left
                         ? static_cast<double>(iv.count) / (nn * (iv.right - iv.left))
                         : 0.0;
        a.intervals.push_back(iv);
    }
    return a;
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline void write_artifact(std::ostream& out, const HistogramArtifact& a) {
    out << HistogramArtifact::kVersionLine << "\n";
    out << "method " << a.method << "\n";
    out << "n " << a.n << "\n";
    out << "epsilon " << detail::fmt_double(a.epsilon) << "\n";
    out << "grid_bins " << a.grid_bins << "\n";
    out << "granularity " << a.granularity << "\n";
    out << "k " << a.k() << "\n";
    out << "cost_nats " << detail::fmt_double(a.cost_nats) << "\n";
    out << "wall_seconds " << detail::fmt_double(a.wall_seconds) << "\n";
    for (const auto& iv : a.intervals) {
        out << "interval " << detail::fmt_double(iv.left) << " " << detail::fmt_double(iv.right)
            << " " << iv.count << " " << detail::fmt_double(iv.density) << "\n";
    }
}

inline void write_artifact(const std::string& path, const HistogramArtifact& a) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write artifact: " + path);
    write_artifact(out, a);
}

inline HistogramArtifact read_artifact(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != HistogramArtifact::kVersionLine) {
        throw DataError("not a mdlhist artifact (bad version line)");
    }
    HistogramArtifact a;
    long long declared_k = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "method") {
            ls >> a.method;
        } else if (key == "n") {
            ls >> a.n;
        } else if (key == "epsilon") {
            ls >> a.epsilon;
        } else if (key == "grid_bins") {
            ls >> a.grid_bins;
        } else if (key == "granularity") {
            ls >> a.granularity;
        } else if (key == "k") {
            ls >> declared_k;
        } else if (key == "cost_nats") {
            ls >> a.cost_nats;
        } else if (key == "wall_seconds") {
            ls >> a.wall_seconds;
        } else if (key == "interval") {
            HistogramArtifact::Interval iv;
            ls >> iv.left >> iv.right >> iv.count >> iv.density;
            a.intervals.push_back(iv);
        } else {
            throw DataError("artifact: unknown field '" + key + "'");
        }
        if (!ls && key != "method") throw DataError("artifact: malformed line: " + line);
    }
    if (declared_k != a.k()) throw DataError("artifact: interval count mismatch");
    return a;
}

inline HistogramArtifact read_artifact(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open artifact: " + path);
    return read_artifact(in);
}

inline HistogramDensity artifact_density(const HistogramArtifact& a) {
    std::vector<double> edges, dens;
    edges.reserve(a.intervals.size() + 1);
    dens.reserve(a.intervals.size());
    for (const auto& iv : a.intervals) {
        if (edges.empty()) edges.push_back(iv.left);
        edges.push_back(iv.right);
        dens.push_back(iv.density);
    }
    return HistogramDensity(std::move(edges), std::move(dens));
}

/// Two-column (x, density) staircase sampled at the interval edges.
inline void write_plot(std::ostream& out, const HistogramArtifact& a) {
    for (const auto& iv : a.intervals) {
        out << detail::fmt_double(iv.left) << " " << detail::fmt_double(iv.density) << "\n";
        out << detail::fmt_double(iv.right) << " " << detail::fmt_double(iv.density) << "\n";
    }
}

}  // namespace mdlhist
