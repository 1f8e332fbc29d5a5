// bound.hpp
// Closed-form lower bound on conditional von Neumann entropy for states that
// are classical on the key register, given per-pair norms and real overlaps,
// plus the classical conditional entropies paired with it in key rates.

#pragma once

#include "qkd/density.hpp"

namespace qkd {

inline constexpr double kCauchyTol = 1e-9;

// One paired block of the decomposition: the key bit 0 branch has squared
// norm n0, the key bit 1 branch n1, and re_overlap is the real part of the
// cross inner product between the two branch vectors.
struct PairTerm {
    double n0 = 0.0;
    double n1 = 0.0;
    double re_overlap = 0.0;

    void validate() const {
        if (n0 < -kCauchyTol || n1 < -kCauchyTol)
            throw domain_error("PairTerm: negative branch norm");
        if (std::abs(re_overlap) > std::sqrt(std::max(0.0, n0 * n1)) + kCauchyTol)
            throw domain_error("PairTerm: overlap violates Cauchy-Schwarz");
    }
};

struct BoundResult {
    double s_lower = 0.0;  // entropy lower bound in bits
    struct Term {
        double weight = 0.0;   // (n0 + n1) / N
        double lambda = 0.0;   // dominant eigenvalue of the adversary block
        double s_term = 0.0;   // per-term conditional entropy contribution
    };
    std::vector<Term> per_term;
};

// Entropy lower bound over a paired decomposition.  Each block with both
// norms positive contributes h(n0/(n0+n1)) - h(lambda) where lambda grows
// with the magnitude of the real overlap; blocks with a vanished branch
// contribute nothing.
inline BoundResult conditional_entropy_bound(const std::vector<PairTerm>& terms) {
    double total = 0.0;
    for (const auto& t : terms) {
        t.validate();
        total += std::max(0.0, t.n0) + std::max(0.0, t.n1);
    }
    if (total <= 0.0) throw domain_error("conditional_entropy_bound: all terms vanish");

    BoundResult out;
    out.per_term.reserve(terms.size());
    for (const auto& t : terms) {
        const double n0 = std::max(0.0, t.n0);
        const double n1 = std::max(0.0, t.n1);
        BoundResult::Term row;
        row.weight = (n0 + n1) / total;
        if (n0 > 0.0 && n1 > 0.0) {
            const double sum = n0 + n1;
            double lambda =
                0.5 + std::sqrt((n0 - n1) * (n0 - n1) +
                                4.0 * t.re_overlap * t.re_overlap) /
                          (2.0 * sum);
            if (lambda > 1.0 + kCauchyTol)
                throw domain_error("conditional_entropy_bound: eigenvalue above 1");
            lambda = std::min(1.0, lambda);
            row.lambda = lambda;
            row.s_term = binary_entropy(n0 / sum) - binary_entropy(lambda);
            if (row.s_term < 0.0) {
                if (row.s_term < -1e-12)
                    throw domain_error("conditional_entropy_bound: negative term beyond round-off");
                row.s_term = 0.0;
            }
        } else {
            row.lambda = 1.0;
            row.s_term = 0.0;
        }
        out.s_lower += row.weight * row.s_term;
        out.per_term.push_back(row);
    }
    return out;
}

// H(first | second) for a joint distribution over two bits, laid out row-major
// as p[first*2 + second].
inline double conditional_shannon(const std::vector<double>& joint) {
    if (joint.size() != 4) throw domain_error("conditional_shannon: expected a 2x2 joint");
    const double h_joint = shannon_entropy(joint);
    const std::vector<double> marginal = {joint[0] + joint[2], joint[1] + joint[3]};
    return h_joint - shannon_entropy(marginal);
}

// A paired decomposition with the branch vectors spelled out, used to compare
// the closed-form bound against exact diagonalization.
using GPair = std::pair<cvec, cvec>;

struct OracleGap {
    double exact = 0.0;  // S(key | adversary) by eigen-decomposition
    double bound = 0.0;  // closed-form lower bound on the same state
    double gap = 0.0;    // exact - bound; must not be meaningfully negative
};

inline std::vector<PairTerm> pair_terms_from_vectors(const std::vector<GPair>& pairs) {
    std::vector<PairTerm> terms;
    terms.reserve(pairs.size());
    for (const auto& [g0, g1] : pairs)
        terms.push_back({norm2(g0), norm2(g1), inner(g0, g1).real()});
    return terms;
}

inline ComplexMatrix state_from_pairs(const std::vector<GPair>& pairs) {
    if (pairs.empty()) throw domain_error("state_from_pairs: empty decomposition");
    const std::size_t d = pairs.front().first.size();
    double total = 0.0;
    ComplexMatrix block0(d, d), block1(d, d);
    for (const auto& [g0, g1] : pairs) {
        block0 = block0 + projector(g0);
        block1 = block1 + projector(g1);
        total += norm2(g0) + norm2(g1);
    }
    if (total <= 0.0) throw domain_error("state_from_pairs: zero trace");
    ComplexMatrix rho(2 * d, 2 * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            rho(i, j) = block0(i, j) / total;
            rho(d + i, d + j) = block1(i, j) / total;
        }
    return rho;
}

// Exact conditional entropy of the state assembled from the decomposition,
// against the closed-form bound computed from the same pairing.
inline OracleGap oracle_gap(const std::vector<GPair>& pairs) {
    OracleGap out;
    const ComplexMatrix rho = state_from_pairs(pairs);
    out.exact = exact_conditional_entropy(rho, 2, pairs.front().first.size());
    out.bound = conditional_entropy_bound(pair_terms_from_vectors(pairs)).s_lower;
    out.gap = out.exact - out.bound;
    return out;
}

}  // namespace qkd
