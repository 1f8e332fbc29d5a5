// threshold.hpp
// Noise level at which a key-rate curve crosses zero, by bisection.

#pragma once

#include <functional>

#include "qkd/common.hpp"

namespace qkd {

inline double threshold(const std::function<double(double)>& rate_at, double lo, double hi,
                        double tol = 1e-4) {
    if (!(hi > lo)) throw domain_error("threshold: empty bracket");
    double r_lo = rate_at(lo);
    double r_hi = rate_at(hi);
    if (!(r_lo > 0.0 && r_hi <= 0.0))
        throw domain_error("threshold: no sign change across the bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (rate_at(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace qkd
