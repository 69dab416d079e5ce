#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mdlhist/dataset.hpp"
#include "mdlhist/rng.hpp"

namespace mdlhist {

namespace detail {

inline double normal_pdf(double x, double mu, double sigma) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

inline double normal_cdf(double x, double mu, double sigma) {
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::numbers::sqrt2));
}

// Triangular on [0, 1] with mode c.
inline double triangle_pdf(double x, double c) {
    if (x < 0.0 || x > 1.0) return 0.0;
    if (x <= c) return c == 0.0 ? 0.0 : 2.0 * x / c;
    return 2.0 * (1.0 - x) / (1.0 - c);
}

inline double triangle_cdf(double x, double c) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (x <= c) return x * x / c;
    return 1.0 - (1.0 - x) * (1.0 - x) / (1.0 - c);
}

inline double triangle_quantile(double u, double c) {
    if (u <= c) return std::sqrt(u * c);
    return 1.0 - std::sqrt((1.0 - u) * (1.0 - c));
}

}  // namespace detail

/// One of the benchmark reference densities: a mixture whose components are
/// normals, a standard Cauchy, uniforms on [0,1], or triangulars on [0,1].
class ReferenceDensity {
  public:
    enum class Component { kNormal, kCauchy, kUniform, kTriangle };

    static ReferenceDensity normal() {
        return ReferenceDensity("normal", {{Component::kNormal, 1.0, 0.0, 1.0}});
    }
    /// Ratio of two independent standard normals, i.e. standard Cauchy.
    static ReferenceDensity cauchy() {
        return ReferenceDensity("cauchy", {{Component::kCauchy, 1.0, 0.0, 1.0}});
    }
    static ReferenceDensity uniform() {
        return ReferenceDensity("uniform", {{Component::kUniform, 1.0, 0.0, 0.0}});
    }
    static ReferenceDensity triangle(double mode = 0.158) {
        return ReferenceDensity("triangle", {{Component::kTriangle, 1.0, mode, 0.0}});
    }
    static ReferenceDensity triangle_mixture() {
        return ReferenceDensity("triangle-mixture", {{Component::kTriangle, 0.1, 0.158, 0.0},
                                                     {Component::kTriangle, 0.3, 0.258, 0.0},
                                                     {Component::kTriangle, 0.4, 0.500, 0.0},
                                                     {Component::kTriangle, 0.2, 0.858, 0.0}});
    }
    static ReferenceDensity claw() {
        return ReferenceDensity("claw", {{Component::kNormal, 0.5, 0.0, 1.0},
                                         {Component::kNormal, 0.1, -1.0, 0.1},
                                         {Component::kNormal, 0.1, -0.5, 0.1},
                                         {Component::kNormal, 0.1, 0.0, 0.1},
                                         {Component::kNormal, 0.1, 0.5, 0.1},
                                         {Component::kNormal, 0.1, 1.0, 0.1}});
    }

    /// normal | cauchy | uniform | triangle | triangle(<mode>) |
    /// triangle-mixture | claw
    static ReferenceDensity by_name(std::string_view name) {
        if (name == "normal") return normal();
        if (name == "cauchy") return cauchy();
        if (name == "uniform") return uniform();
        if (name == "triangle") return triangle();
        if (name == "triangle-mixture") return triangle_mixture();
        if (name == "claw" || name == "gaussian-mixture") return claw();
        if (name.starts_with("triangle(") && name.ends_with(")")) {
            const std::string arg(name.substr(9, name.size() - 10));
            return triangle(std::stod(arg));
        }
        throw std::invalid_argument("unknown density name: " + std::string(name));
    }

    static const std::vector<std::string>& all_names() {
        static const std::vector<std::string> names = {
            "normal", "cauchy", "uniform", "triangle", "triangle-mixture", "claw"};
        return names;
    }

    const std::string& name() const { return name_; }

    double pdf(double x) const {
        double p = 0.0;
        for (const auto& c : components_) {
            switch (c.kind) {
                case Component::kNormal: p += c.weight * detail::normal_pdf(x, c.a, c.b); break;
                case Component::kCauchy:
                    p += c.weight / (std::numbers::pi * (1.0 + x * x));
                    break;
                case Component::kUniform: p += c.weight * (x >= 0.0 && x <= 1.0 ? 1.0 : 0.0); break;
                case Component::kTriangle: p += c.weight * detail::triangle_pdf(x, c.a); break;
            }
        }
        return p;
    }

    double cdf(double x) const {
        double p = 0.0;
        for (const auto& c : components_) {
            switch (c.kind) {
                case Component::kNormal: p += c.weight * detail::normal_cdf(x, c.a, c.b); break;
                case Component::kCauchy:
                    p += c.weight * (0.5 + std::atan(x) / std::numbers::pi);
                    break;
                case Component::kUniform:
                    p += c.weight * std::clamp(x, 0.0, 1.0);
                    break;
                case Component::kTriangle: p += c.weight * detail::triangle_cdf(x, c.a); break;
            }
        }
        return p;
    }

    bool bounded() const {
        for (const auto& c : components_) {
            if (c.kind == Component::kNormal || c.kind == Component::kCauchy) return false;
        }
        return true;
    }
    double support_lo() const {
        return bounded() ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    double support_hi() const {
        return bounded() ? 1.0 : std::numeric_limits<double>::infinity();
    }

    /// Points where the pdf is non-smooth or sharply featured; quadrature
    /// segments are split there.
    std::vector<double> knots() const {
        std::vector<double> k;
        for (const auto& c : components_) {
            switch (c.kind) {
                case Component::kNormal:
                    for (int s = -3; s <= 3; ++s) k.push_back(c.a + s * c.b);
                    break;
                case Component::kCauchy:
                    for (const double x : {-8.0, -2.0, -0.5, 0.0, 0.5, 2.0, 8.0}) k.push_back(x);
                    break;
                case Component::kUniform:
                    k.push_back(0.0);
                    k.push_back(1.0);
                    break;
                case Component::kTriangle:
                    k.push_back(0.0);
                    k.push_back(c.a);
                    k.push_back(1.0);
                    break;
            }
        }
        return k;
    }

    /// n i.i.d. draws; reproducible from the seed across platforms.
    std::vector<double> sample_values(long long n, std::uint64_t seed) const {
        SplitMix64 rng(seed);
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(n));
        for (long long i = 0; i < n; ++i) out.push_back(draw(rng));
        return out;
    }

    Dataset sample(long long n, std::uint64_t seed) const {
        if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
        return make_dataset(sample_values(n, seed));
    }

  private:
    struct Spec {
        Component kind;
        double weight;
        double a;  // mean / mode
        double b;  // std
    };

    ReferenceDensity(std::string name, std::vector<Spec> components)
        : name_(std::move(name)), components_(std::move(components)) {}

    double draw(SplitMix64& rng) const {
        const Spec& c = pick(rng);
        switch (c.kind) {
            case Component::kNormal: return c.a + c.b * rng.normal();
            case Component::kCauchy: {
                double denom = rng.normal();
                while (denom == 0.0) denom = rng.normal();
                return rng.normal() / denom;
            }
            case Component::kUniform: return rng.uniform01();
            case Component::kTriangle: return detail::triangle_quantile(rng.uniform01(), c.a);
        }
        return 0.0;
    }

    const Spec& pick(SplitMix64& rng) const {
        if (components_.size() == 1) return components_.front();
        const double u = rng.uniform01();
        double acc = 0.0;
        for (const auto& c : components_) {
            acc += c.weight;
            if (u < acc) return c;
        }
        return components_.back();
    }

    std::string name_;
    std::vector<Spec> components_;
};

}  // namespace mdlhist
