#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mdlhist/model.hpp"

namespace mdlhist {

/// Anything with a pdf, an exact cdf, breakpoint hints, and support bounds
/// (+-inf for unbounded sides).
template <class D>
concept Density = requires(const D& d, double x) {
    { d.pdf(x) } -> std::convertible_to<double>;
    { d.cdf(x) } -> std::convertible_to<double>;
    { d.knots() } -> std::convertible_to<std::vector<double>>;
    { d.support_lo() } -> std::convertible_to<double>;
    { d.support_hi() } -> std::convertible_to<double>;
};

/// Piecewise-constant density of a fitted histogram, usable on either side
/// of the Hellinger distance.
class HistogramDensity {
  public:
    HistogramDensity(std::vector<double> edges, std::vector<double> densities)
        : edges_(std::move(edges)), dens_(std::move(densities)) {
        if (edges_.size() != dens_.size() + 1 || dens_.empty()) {
            throw std::invalid_argument("HistogramDensity: edge/density size mismatch");
        }
        cum_.assign(edges_.size(), 0.0);
        for (std::size_t i = 0; i < dens_.size(); ++i) {
            cum_[i + 1] = cum_[i] + dens_[i] * (edges_[i + 1] - edges_[i]);
        }
    }

    HistogramDensity(const HistogramModel& m, const GridSpec& g)
        : HistogramDensity(edges_of(m, g), densities_of(m, g)) {}

    double pdf(double x) const {
        if (x <= edges_.front() || x > edges_.back()) return 0.0;
        const auto it = std::lower_bound(edges_.begin() + 1, edges_.end(), x);
        return dens_[static_cast<std::size_t>(std::distance(edges_.begin() + 1, it))];
    }
    double cdf(double x) const {
        if (x <= edges_.front()) return 0.0;
        if (x >= edges_.back()) return cum_.back();
        const auto it = std::lower_bound(edges_.begin() + 1, edges_.end(), x);
        const auto i = static_cast<std::size_t>(std::distance(edges_.begin() + 1, it));
        return cum_[i] + dens_[i] * (x - edges_[i]);
    }
    std::vector<double> knots() const { return edges_; }
    double support_lo() const { return edges_.front(); }
    double support_hi() const { return edges_.back(); }

  private:
    static std::vector<double> edges_of(const HistogramModel& m, const GridSpec& g) {
        std::vector<double> e;
        e.reserve(m.cuts.size());
        for (const long long t : m.cuts) e.push_back(g.edge(t));
        return e;
    }
    static std::vector<double> densities_of(const HistogramModel& m, const GridSpec& g) {
        std::vector<double> d;
        d.reserve(m.counts.size());
        const double n = static_cast<double>(m.n());
        for (long long k = 0; k < m.k(); ++k) {
            const double len = g.edge(m.cuts[static_cast<std::size_t>(k) + 1]) -
                               g.edge(m.cuts[static_cast<std::size_t>(k)]);
            d.push_back(len > 0.0 ? static_cast<double>(m.counts[static_cast<std::size_t>(k)]) /
                                        (n * len)
                                  : 0.0);
        }
        return d;
    }

    std::vector<double> edges_;
    std::vector<double> dens_;
    std::vector<double> cum_;
};

namespace detail {

/// Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton
/// iteration on the Legendre recurrence.
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order) {
    static const auto compute = [](int m) {
        std::vector<double> nodes(static_cast<std::size_t>(m));
        std::vector<double> weights(static_cast<std::size_t>(m));
        for (int i = 0; i < (m + 1) / 2; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= m; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            nodes[static_cast<std::size_t>(i)] = -x;
            nodes[static_cast<std::size_t>(m - 1 - i)] = x;
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[static_cast<std::size_t>(i)] = w;
            weights[static_cast<std::size_t>(m - 1 - i)] = w;
        }
        return std::make_pair(nodes, weights);
    };
    static const auto rule64 = compute(64);
    static const auto rule16 = compute(16);
    if (order == 64) return rule64;
    if (order == 16) return rule16;
    static thread_local std::pair<std::vector<double>, std::vector<double>> custom;
    custom = compute(order);
    return custom;
}

}  // namespace detail

struct HellingerOptions {
    int nodes_per_segment = 64;   // reproduces the uniform-overlap oracle to 1e-7
    int max_ref_segments = 1024;  // extra uniform subdivision of the domain
    double tail_mass = 1e-15;     // truncation mass per side when both supports are unbounded
};

/// Hellinger distance H(p, q) = sqrt( (1/2) Int (sqrt p - sqrt q)^2 ), in
/// [0, 1], not squared. Piecewise Gauss-Legendre between the union of both
/// densities' breakpoints; where one density's support ends, the other's
/// tail mass enters exactly through its cdf.
template <Density P, Density Q>
double hellinger(const P& p, const Q& q, const HellingerOptions& opt = {}) {
    const auto finite = [](double x) { return std::isfinite(x); };

    // Quadrature window. Per side: if either support is bounded there, the
    // window stops at the outermost finite bound (beyond it one density is
    // exactly zero and the other's mass enters through its cdf); if both are
    // unbounded, truncate where both tails fall below tail_mass.
    // Mixture cdfs may saturate a hair away from 0/1 (weight-sum rounding),
    // so a stalled mass below 1e-12 counts as having reached the floor.
    const auto expand = [&](auto dir_mass, double start, double step_sign) {
        double x = start, step = 1.0;
        double prev_mass = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 120; ++it) {
            const double mass = dir_mass(x);
            if (mass <= opt.tail_mass) return x;
            if (mass >= prev_mass && mass <= 1e-12) return x;
            prev_mass = mass;
            x += step_sign * step;
            step *= 2.0;
        }
        if (prev_mass <= 1e-12) return x;
        throw std::runtime_error("hellinger: tail integral does not converge");
    };
    const double plo = p.support_lo(), qlo = q.support_lo();
    const double phi = p.support_hi(), qhi = q.support_hi();
    double lo, hi;
    if (finite(plo) && finite(qlo)) {
        lo = std::min(plo, qlo);
    } else if (finite(plo) || finite(qlo)) {
        lo = finite(plo) ? plo : qlo;
    } else {
        lo = expand([&](double x) { return std::max(p.cdf(x), q.cdf(x)); }, -1.0, -1.0);
    }
    if (finite(phi) && finite(qhi)) {
        hi = std::max(phi, qhi);
    } else if (finite(phi) || finite(qhi)) {
        hi = finite(phi) ? phi : qhi;
    } else {
        hi = expand([&](double x) { return std::max(1.0 - p.cdf(x), 1.0 - q.cdf(x)); }, 1.0, 1.0);
    }
    if (!(hi > lo)) return 1.0;  // degenerate window: supports collapse

    // Tail contribution: outside [lo, hi] at least one density is zero (or
    // both carry <= tail_mass), so Int (sqrt p - sqrt q)^2 = mass_p + mass_q
    // there, up to the negligible truncated cross term.
    double integral = (p.cdf(lo) + 1.0 - p.cdf(hi)) + (q.cdf(lo) + 1.0 - q.cdf(hi));

    // Segment breakpoints: both knot sets plus a uniform refinement.
    std::vector<double> brk;
    brk.push_back(lo);
    brk.push_back(hi);
    for (const double k : p.knots()) {
        if (k > lo && k < hi) brk.push_back(k);
    }
    for (const double k : q.knots()) {
        if (k > lo && k < hi) brk.push_back(k);
    }
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

    const double ref_w = (hi - lo) / static_cast<double>(opt.max_ref_segments);
    const auto& [nodes, weights] = detail::gauss_legendre(opt.nodes_per_segment);

    for (std::size_t s = 0; s + 1 < brk.size(); ++s) {
        const double a = brk[s], b = brk[s + 1];
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / ref_w)));
        const double w = (b - a) / pieces;
        for (int piece = 0; piece < pieces; ++piece) {
            const double pa = a + piece * w;
            const double mid = pa + 0.5 * w, half = 0.5 * w;
            double acc = 0.0;
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                const double x = mid + half * nodes[j];
                const double diff = std::sqrt(std::max(0.0, p.pdf(x))) -
                                    std::sqrt(std::max(0.0, q.pdf(x)));
                acc += weights[j] * diff * diff;
            }
            integral += acc * half;
        }
    }

    return std::sqrt(std::max(0.0, 0.5 * integral));
}

}  // namespace mdlhist
