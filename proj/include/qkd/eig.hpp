// eig.hpp
// Cyclic Jacobi eigensolver for Hermitian matrices of dimension <= 64.

#pragma once

#include <algorithm>
#include <numeric>

#include "qkd/matrix.hpp"

namespace qkd {

inline constexpr std::size_t kMaxEigDim = 64;
inline constexpr int kJacobiSweepCap = 100;
inline constexpr double kJacobiOffTol = 1e-12;

struct EigResult {
    std::vector<double> values;  // real eigenvalues, descending
    ComplexMatrix vectors;       // column k pairs with values[k]
};

// Diagonalizes a Hermitian matrix with cyclic Jacobi rotations.  Each rotation
// zeroes one off-diagonal entry of the working copy; sweeps repeat until every
// off-diagonal magnitude is below kJacobiOffTol.
inline EigResult eig_hermitian(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 0 || m.cols() != n) throw domain_error("eig_hermitian: matrix not square");
    if (n > kMaxEigDim) throw domain_error("eig_hermitian: dimension above cap");
    if (!m.is_hermitian()) throw domain_error("eig_hermitian: matrix not Hermitian");

    ComplexMatrix a = m;
    ComplexMatrix v = ComplexMatrix::identity(n);

    auto max_offdiag = [&]() {
        double worst = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                worst = std::max(worst, std::abs(a(p, q)));
        return worst;
    };

    int sweep = 0;
    for (; sweep < kJacobiSweepCap; ++sweep) {
        if (max_offdiag() <= kJacobiOffTol) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= kJacobiOffTol * 1e-3) continue;

                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const complex phase = apq / mag;

                // tan(2*theta) = 2|apq| / (aqq - app), resolved the stable way.
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const complex sp = s * phase;

                // a <- R^dag a R with R acting on the (p,q) plane:
                //   R[p][p]=c, R[p][q]=s*phase, R[q][p]=-s*conj(phase), R[q][q]=c
                for (std::size_t k = 0; k < n; ++k) {
                    const complex akp = a(k, p);
                    const complex akq = a(k, q);
                    a(k, p) = c * akp - std::conj(sp) * akq;
                    a(k, q) = sp * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const complex apk = a(p, k);
                    const complex aqk = a(q, k);
                    a(p, k) = c * apk - sp * aqk;
                    a(q, k) = std::conj(sp) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = complex{a(p, p).real(), 0.0};
                a(q, q) = complex{a(q, q).real(), 0.0};

                for (std::size_t k = 0; k < n; ++k) {
                    const complex vkp = v(k, p);
                    const complex vkq = v(k, q);
                    v(k, p) = c * vkp - std::conj(sp) * vkq;
                    v(k, q) = sp * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == kJacobiSweepCap && max_offdiag() > kJacobiOffTol)
        throw infeasible_error("eig_hermitian: no convergence within sweep cap");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

    EigResult out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = diag[order[k]];
        out.vectors.set_column(k, v.column(order[k]));
    }
    return out;
}

}  // namespace qkd
