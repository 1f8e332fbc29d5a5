// random.hpp
// Seeded randomness with a fixed bit-level contract: identical streams on
// every platform.  Distribution sampling is done by hand for that reason.

#pragma once

#include <cstdint>
#include <random>

#include "qkd/matrix.hpp"

namespace qkd {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        return std::min<std::size_t>(static_cast<std::size_t>(uniform() * static_cast<double>(n)),
                                     n - 1);
    }

    // Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586476925286766559;
        spare_ = r * std::sin(two_pi * u2);
        have_spare_ = true;
        return r * std::cos(two_pi * u2);
    }

    complex gaussian_complex() {
        const double re = gaussian();
        const double im = gaussian();
        return complex{re, im} * 0.7071067811865475244;
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Haar-distributed unitary: QR of a complex standard-Gaussian matrix via
// modified Gram-Schmidt with a second orthogonalization pass.  The diagonal of
// R comes out real positive, which is exactly the convention that makes Q
// Haar-distributed.
inline ComplexMatrix haar_unitary(std::size_t n, Rng& rng) {
    ComplexMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.gaussian_complex();

    ComplexMatrix q(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        cvec v = g.column(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) {
                const cvec qi = q.column(i);
                const complex proj = inner(qi, v);
                for (std::size_t k = 0; k < n; ++k) v[k] -= proj * qi[k];
            }
        }
        const double nrm = std::sqrt(norm2(v));
        if (nrm < 1e-12) throw infeasible_error("haar_unitary: rank-deficient sample");
        for (std::size_t k = 0; k < n; ++k) v[k] /= nrm;
        q.set_column(j, v);
    }
    return q;
}

}  // namespace qkd
