// common.hpp
// Shared scalar/vector types and error categories for the qkd library.

#pragma once

#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qkd {

using complex = std::complex<double>;
using cvec = std::vector<complex>;

// Raised when inputs violate an operation's domain (bad flags, out-of-range
// parameters, malformed files).
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when the mathematics itself fails: no attack is consistent with the
// given statistics, a constraint set is empty, or an iteration cap is hit.
struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline complex inner(const cvec& u, const cvec& v) {
    if (u.size() != v.size()) throw domain_error("inner: dimension mismatch");
    complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * v[i];
    return acc;
}

inline double norm2(const cvec& v) {
    double acc = 0.0;
    for (const auto& x : v) acc += std::norm(x);
    return acc;
}

inline cvec scaled(const cvec& v, complex c) {
    cvec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * v[i];
    return out;
}

inline cvec lincomb(complex a, const cvec& u, complex b, const cvec& v) {
    if (u.size() != v.size()) throw domain_error("lincomb: dimension mismatch");
    cvec out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = a * u[i] + b * v[i];
    return out;
}

inline cvec added(const cvec& u, const cvec& v) {
    return lincomb({1.0, 0.0}, u, {1.0, 0.0}, v);
}

// Closed interval; a point value is represented with lo == hi.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static Interval point(double x) { return {x, x}; }
    static Interval symmetric(double radius) { return {-radius, radius}; }

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool is_point() const { return lo == hi; }
    bool contains(double x, double slack = 0.0) const {
        return x >= lo - slack && x <= hi + slack;
    }
    Interval negated() const { return {-hi, -lo}; }
    Interval clamped(double bound) const {
        return {std::max(lo, -bound), std::min(hi, bound)};
    }
};

}  // namespace qkd
