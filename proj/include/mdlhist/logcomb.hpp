#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mdlhist {

/// All combinatorial quantities are returned in nats.

namespace detail {

// ln(k!) table for small arguments; entries are independent lgamma
// evaluations, so there is no cumulative rounding drift.
inline constexpr std::size_t kLogFactorialTableSize = 1'000'001;

inline const std::vector<double>& log_factorial_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(kLogFactorialTableSize);
        t[0] = 0.0;
        for (std::size_t k = 1; k < t.size(); ++k) {
            t[k] = std::lgamma(static_cast<double>(k) + 1.0);
        }
        return t;
    }();
    return table;
}

}  // namespace detail

/// ln(k!), exact convention 0! = 1.
inline double log_factorial(long long k) {
    if (k < 0) throw std::invalid_argument("log_factorial: negative argument");
    const auto& table = detail::log_factorial_table();
    if (static_cast<std::size_t>(k) < table.size()) {
        return table[static_cast<std::size_t>(k)];
    }
    return std::lgamma(static_cast<double>(k) + 1.0);
}

/// ln C(a, b). The short-side product form avoids the cancellation that a
/// plain lgamma difference suffers when min(b, a-b) is small and a is huge
/// (e.g. a ~ 2^30).
inline double log_binomial(long long a, long long b) {
    if (b < 0 || b > a) throw std::invalid_argument("log_binomial: need 0 <= b <= a");
    const long long m = std::min(b, a - b);
    if (m == 0) return 0.0;
    if (m <= 100) {
        double s = 0.0;
        for (long long i = 1; i <= m; ++i) {
            s += std::log(static_cast<double>(a - m + i)) - std::log(static_cast<double>(i));
        }
        return s;
    }
    return log_factorial(a) - log_factorial(b) - log_factorial(a - b);
}

/// ln( n! / (h_1! ... h_K!) ); the counts must sum to n.
template <class Counts>
inline double log_multinomial(long long n, const Counts& h) {
    long long sum = 0;
    double s = log_factorial(n);
    for (const auto hk : h) {
        if (hk < 0) throw std::invalid_argument("log_multinomial: negative count");
        sum += static_cast<long long>(hk);
        s -= log_factorial(static_cast<long long>(hk));
    }
    if (sum != n) throw std::invalid_argument("log_multinomial: counts do not sum to n");
    return s;
}

/// Rissanen universal code length for a positive integer, converted to nats:
/// ln(2) * ( log2(kappa0) + sum_j max(log2^(j)(k), 0) ) with kappa0 = 2.865.
inline double log_star(long long k) {
    if (k < 1) throw std::invalid_argument("log_star: k must be >= 1");
    static const double kKappa0Log2 = std::log2(2.865);
    double bits = kKappa0Log2;
    double t = std::log2(static_cast<double>(k));
    while (t > 0.0) {
        bits += t;
        t = std::log2(t);
    }
    return bits * std::numbers::ln2;
}

}  // namespace mdlhist
