// b92.hpp
// Key rate of the extended two-state protocol: |0> encodes key bit 0 and the
// tilted state |a> (at the key-distillation angle) encodes key bit 1.  The
// receiver keeps |abar> and |1> outcomes as conclusive.

#pragma once

#include "qkd/bound.hpp"
#include "qkd/optimize.hpp"
#include "qkd/report.hpp"
#include "qkd/tomography.hpp"

namespace qkd {

namespace detail {

// Disturbance probability of the tilted basis, expanded in Gram entries.
inline double a_basis_flip_probability(const std::array<double, 4>& n, double re01, double re02,
                                       double re03, double re12, double re13, double re23,
                                       double alpha) {
    const double a = alpha;
    const double ab = std::sqrt(std::max(0.0, 1.0 - a * a));
    const double a2 = a * a, ab2 = ab * ab;
    return a2 * ab2 * (n[0] + n[3]) + ab2 * ab2 * n[2] + a2 * a2 * n[1] +
           2.0 * ab2 * ab * a * re02 - 2.0 * ab * a2 * a * re01 - 2.0 * a2 * ab2 * re03 -
           2.0 * a2 * ab2 * re12 - 2.0 * a * ab2 * ab * re23 + 2.0 * a2 * a * ab * re13;
}

}  // namespace detail

// The two paired blocks and the (key, outcome) joint for one candidate choice
// of the free Gram entries.
struct B92Decomposition {
    PairTerm conclusive;        // both parties right
    PairTerm wrong;             // at least one inconclusive-side error
    std::vector<double> joint;  // P(A=i, B=j), row-major in (i, j)
    bool physical = true;       // candidate obeys Cauchy-Schwarz on both blocks
};

inline B92Decomposition b92_decomposition(const std::array<double, 4>& norms, double re01,
                                          double re02, double re03, double re12, double re13,
                                          double re23, double alpha_key) {
    const double a = alpha_key;
    const double ab = std::sqrt(std::max(0.0, 1.0 - a * a));
    const double p00 = norms[0], p01 = norms[1], p11 = norms[3];

    B92Decomposition d;
    d.conclusive.n0 = std::max(0.0, ab * ab * p00 + a * a * p01 - 2.0 * a * ab * re01);
    d.conclusive.n1 = std::max(0.0, a * a * p01 + ab * ab * p11 + 2.0 * a * ab * re13);
    d.conclusive.re_overlap =
        a * ab * re01 + ab * ab * re03 - a * a * p01 - a * ab * re13;
    d.wrong.n0 = p01;
    d.wrong.n1 = std::max(0.0, detail::a_basis_flip_probability(norms, re01, re02, re03, re12,
                                                                re13, re23, alpha_key));
    d.wrong.re_overlap = a * ab * re01 + ab * ab * re12 - a * a * p01 - a * ab * re13;

    for (PairTerm* t : {&d.conclusive, &d.wrong}) {
        const double cap = std::sqrt(std::max(0.0, t->n0 * t->n1));
        if (std::abs(t->re_overlap) > cap + kCauchyTol) {
            d.physical = false;
        } else {
            t->re_overlap = std::min(cap, std::max(-cap, t->re_overlap));
        }
    }

    const double total = d.conclusive.n0 + d.conclusive.n1 + d.wrong.n0 + d.wrong.n1;
    if (total > 0.0)
        d.joint = {d.conclusive.n0 / total, d.wrong.n0 / total, d.wrong.n1 / total,
                   d.conclusive.n1 / total};
    return d;
}

inline KeyRateReport b92_keyrate(const GramEstimates& gram, const AttackStats& stats,
                                 double alpha_key) {
    if (!(alpha_key >= 0.0 && alpha_key < 1.0))
        throw domain_error("b92_keyrate: alpha_key must lie in [0,1)");
    const std::array<double, 4> norms = {stats.p("0", "0"), stats.p("0", "1"),
                                         stats.p("1", "0"), stats.p("1", "1")};
    for (int i = 0; i < 4; ++i)
        if (std::abs(norms[i] - gram.norm[i]) > 1e-6)
            throw domain_error("b92_keyrate: gram norms inconsistent with statistics");

    const double re01 = gram.re01.mid();
    const double re23 = gram.re23.mid();
    const double re02 = gram.re02.mid();
    const double re13 = gram.re13.mid();
    const double sum_0312 = gram.re_sum_03_12();

    auto decompose = [&](double re12) {
        return b92_decomposition(norms, re01, re02, sum_0312 - re12, re12, re13, re23,
                                 alpha_key);
    };
    auto objective = [&](double re12) {
        const B92Decomposition d = decompose(re12);
        if (!d.physical) return std::numeric_limits<double>::infinity();
        return conditional_entropy_bound({d.conclusive, d.wrong}).s_lower;
    };

    ScalarMin best;
    if (gram.re12.is_point()) {
        best = {gram.re12.lo, objective(gram.re12.lo)};
    } else {
        best = minimize_scalar(objective, gram.re12.lo, gram.re12.hi);
    }
    if (!std::isfinite(best.value))
        throw infeasible_error("b92_keyrate: no physical attack in the candidate set");

    const B92Decomposition at_best = decompose(best.x);
    KeyRateReport report;
    report.protocol = "b92";
    report.psi = gram.psi;
    report.alpha_key = alpha_key;
    report.entropy_bound = best.value;
    report.cond_shannon = conditional_shannon(at_best.joint);
    report.rate = report.entropy_bound - report.cond_shannon;
    report.minimizer = {{"re_12", best.x}, {"re_03", sum_0312 - best.x}};
    return report;
}

// Depolarizing-channel evaluation: every cross estimate vanishes, the Z error
// is q in both bases, and with three preparation states only the re03 + re12
// sum (equal to 1 - 2q) is identified.
inline std::pair<GramEstimates, AttackStats> symmetric_channel_data(double q, PsiMode psi) {
    if (q < 0.0 || q >= 0.5) throw domain_error("symmetric channel: q outside [0, 1/2)");
    GramEstimates g;
    g.psi = psi;
    g.norm = {1.0 - q, q, q, 1.0 - q};
    g.re01 = g.re23 = g.re02 = g.re13 = Interval::point(0.0);
    if (psi == PsiMode::Four) {
        g.re03 = Interval::point(1.0 - 2.0 * q);
        g.re12 = Interval::point(0.0);
        g.im01 = g.im23 = g.im02 = g.im13 = Interval::point(0.0);
    } else {
        g.re12 = Interval::symmetric(q);
        g.re03 = {1.0 - 3.0 * q, 1.0 - q};
        g.im01 = g.im23 = Interval::symmetric(std::sqrt(q * (1.0 - q)));
        g.im02 = Interval::symmetric(std::sqrt(q * (1.0 - q)));
        g.im13 = g.im02.negated();
    }
    g.im03 = Interval::symmetric(1.0 - q);
    g.im12 = Interval::symmetric(q);

    AttackStats stats;
    stats.psi = psi;
    stats.set("0", "0", 1.0 - q);
    stats.set("0", "1", q);
    stats.set("1", "0", q);
    stats.set("1", "1", 1.0 - q);
    stats.set("a", "abar", q);
    return {g, stats};
}

inline KeyRateReport b92_symmetric(double q, double alpha_key, PsiMode psi) {
    const auto [gram, stats] = symmetric_channel_data(q, psi);
    return b92_keyrate(gram, stats, alpha_key);
}

// Decomposition of an explicit attack in branch-vector form, for oracle
// comparisons against exact diagonalization.
inline std::vector<GPair> b92_pairs(const OneWayAttack& atk, double alpha_key) {
    const double a = alpha_key;
    const double ab = std::sqrt(std::max(0.0, 1.0 - a * a));
    const cvec f1 = f_states(atk, alpha_key).second;
    return {
        {lincomb(ab, atk.e0, -a, atk.e1), lincomb(a, atk.e1, ab, atk.e3)},
        {atk.e1, f1},
    };
}

}  // namespace qkd
