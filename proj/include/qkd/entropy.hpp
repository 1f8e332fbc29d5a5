// entropy.hpp
// Classical entropies, base two throughout. 0*log(0) is taken as 0.

#pragma once

#include <cmath>
#include <span>

#include "qkd/common.hpp"

namespace qkd {

inline constexpr double kProbSlack = 1e-12;   // tolerated excursion outside [0,1]
inline constexpr double kNormTol = 1e-9;      // tolerated deviation of a sum from 1

namespace detail {
inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }
}  // namespace detail

// Binary Shannon entropy h(x) = -x log2 x - (1-x) log2 (1-x).
inline double binary_entropy(double x) {
    if (x < -kProbSlack || x > 1.0 + kProbSlack)
        throw domain_error("binary_entropy: argument outside [0,1]");
    x = std::min(1.0, std::max(0.0, x));
    return -detail::xlog2x(x) - detail::xlog2x(1.0 - x);
}

// H(p) = -sum p_i log2 p_i for a normalized probability vector.
inline double shannon_entropy(std::span<const double> p) {
    double sum = 0.0;
    for (double x : p) {
        if (x < -kProbSlack || x > 1.0 + kProbSlack)
            throw domain_error("shannon_entropy: entry outside [0,1]");
        sum += x;
    }
    if (std::abs(sum - 1.0) > kNormTol)
        throw domain_error("shannon_entropy: input not normalized");
    double h = 0.0;
    for (double x : p) h -= detail::xlog2x(std::max(0.0, x));
    return h;
}

inline double shannon_entropy(const std::vector<double>& p) {
    return shannon_entropy(std::span<const double>(p));
}

}  // namespace qkd
