// density.hpp
// Density-matrix operations: spectrum entropy, partial trace, conditional entropy.

#pragma once

#include "qkd/eig.hpp"
#include "qkd/entropy.hpp"

namespace qkd {

inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigClampFloor = -1e-9;  // rounds-off negatives up to here

// Entropy of the eigenvalue spectrum of a density matrix, in bits.
// Eigenvalues in [kEigClampFloor, 0) are treated as exact zeros; anything more
// negative means the input was not a state.
inline double von_neumann_entropy(const ComplexMatrix& rho) {
    if (!rho.is_hermitian()) throw domain_error("von_neumann_entropy: not Hermitian");
    if (std::abs(rho.trace() - complex{1.0, 0.0}) > kTraceTol)
        throw domain_error("von_neumann_entropy: trace differs from 1");
    const EigResult eig = eig_hermitian(rho);
    double h = 0.0;
    for (double lambda : eig.values) {
        if (lambda < kEigClampFloor)
            throw domain_error("von_neumann_entropy: negative eigenvalue beyond tolerance");
        if (lambda > 0.0) h -= lambda * std::log2(lambda);
    }
    return h;
}

enum class Keep { First, Second };

// Partial trace of a bipartite state on dims (da, db).
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t da, std::size_t db,
                                   Keep keep) {
    if (rho.rows() != da * db || rho.cols() != da * db)
        throw domain_error("partial_trace: dimension mismatch");
    if (keep == Keep::First) {
        ComplexMatrix out(da, da);
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t j = 0; j < da; ++j)
                for (std::size_t k = 0; k < db; ++k)
                    out(i, j) += rho(i * db + k, j * db + k);
        return out;
    }
    ComplexMatrix out(db, db);
    for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l)
            for (std::size_t i = 0; i < da; ++i) out(k, l) += rho(i * db + k, i * db + l);
    return out;
}

// S(A|B) = S(rho) - S(tr_A rho) for a state on dims (da, db).  Used as the
// exact oracle against which the closed-form entropy bound is validated.
inline double exact_conditional_entropy(const ComplexMatrix& rho, std::size_t da,
                                        std::size_t db) {
    const double joint = von_neumann_entropy(rho);
    ComplexMatrix rho_b = partial_trace(rho, da, db, Keep::Second);
    // Round-off can leave a tiny anti-Hermitian residue after tracing.
    for (std::size_t i = 0; i < rho_b.rows(); ++i)
        for (std::size_t j = 0; j < rho_b.cols(); ++j) {
            const complex sym = 0.5 * (rho_b(i, j) + std::conj(rho_b(j, i)));
            rho_b(i, j) = sym;
            rho_b(j, i) = std::conj(sym);
        }
    return joint - von_neumann_entropy(rho_b);
}

}  // namespace qkd
