// tomography.hpp
// Inversion of observed statistics into estimates of the real and imaginary
// parts of the attack's ancilla Gram matrix.  With four preparation states
// every cross term is identified exactly; with three, two of the real parts
// are only pinned to an interval.

#pragma once

#include <optional>

#include "qkd/stats.hpp"
#include "qkd/two_way.hpp"

namespace qkd {

inline constexpr double kEstimateTol = 1e-8;

struct GramEstimates {
    PsiMode psi = PsiMode::Four;
    double alpha = 0.7071067811865475244;
    double beta = 0.7071067811865475244;

    std::array<double, 4> norm{};  // <e_i|e_i>

    Interval re01, re23, re02, re13, re03, re12;
    Interval im01, im23, im02, im13, im03, im12;

    // Identified sum re03 + re12; recoverable from the stored intervals since
    // the two endpoints are reached jointly.
    double re_sum_03_12() const { return re03.lo + re12.hi; }

    double cauchy_schwarz_cap(int i, int j) const {
        return std::sqrt(std::max(0.0, norm[i] * norm[j]));
    }
};

namespace detail {

inline double clamp_into(double x, double bound) {
    return std::min(bound, std::max(-bound, x));
}

}  // namespace detail

// Recovers Gram estimates from one-way statistics.  Point estimates come from
// the linear inversion of the mismatched-basis probabilities; with only three
// preparation states, re(1,2) is bounded by Cauchy-Schwarz and re(0,3) rides
// on it through the identified sum.
inline GramEstimates estimate_one_way(const AttackStats& stats) {
    const double a = stats.alpha;
    const double ab = std::sqrt(std::max(0.0, 1.0 - a * a));
    if (!(a > 0.0 && a < 1.0))
        throw domain_error("estimate_one_way: alpha must lie strictly inside (0,1)");

    GramEstimates g;
    g.psi = stats.psi;
    g.alpha = stats.alpha;
    g.beta = stats.beta;
    g.norm = {stats.p("0", "0"), stats.p("0", "1"), stats.p("1", "0"), stats.p("1", "1")};
    const double n0 = g.norm[0], n1 = g.norm[1], n2 = g.norm[2], n3 = g.norm[3];

    auto cap = [&](int i, int j) { return g.cauchy_schwarz_cap(i, j); };

    const double denom_a = 2.0 * a * ab;
    g.re01 = Interval::point(
        detail::clamp_into((stats.p("0", "a") - a * a * n0 - ab * ab * n1) / denom_a, cap(0, 1)));
    g.re23 = Interval::point(
        detail::clamp_into((stats.p("1", "a") - a * a * n2 - ab * ab * n3) / denom_a, cap(2, 3)));
    // <e0|e2> = -<e1|e3> under unitarity, so one statistic pins both.
    const double re02_cap = std::min(cap(0, 2), cap(1, 3));
    g.re02 = Interval::point(detail::clamp_into(
        (stats.p("a", "0") - a * a * n0 - ab * ab * n2) / denom_a, re02_cap));
    g.re13 = g.re02.negated();

    // Identified combination re03 + re12 from the a-basis disturbance.
    const double a2ab2 = a * a * ab * ab;
    const double known_a = a2ab2 * (n0 + n3) + ab * ab * ab * ab * n2 + a * a * a * a * n1 +
                           2.0 * ab * ab * ab * a * g.re02.lo - 2.0 * ab * a * a * a * g.re01.lo -
                           2.0 * a * ab * ab * ab * g.re23.lo + 2.0 * a * a * a * ab * g.re13.lo;
    const double sum_0312 = (known_a - stats.p("a", "abar")) / (2.0 * a2ab2);

    if (stats.psi == PsiMode::Four) {
        const double b = stats.beta;
        const double bb = std::sqrt(std::max(0.0, 1.0 - b * b));
        if (!(b > 0.0 && b < 1.0))
            throw domain_error("estimate_one_way: beta must lie strictly inside (0,1)");
        const double denom_b = 2.0 * b * bb;
        g.im01 = Interval::point(detail::clamp_into(
            (stats.p("0", "b") - b * b * n0 - bb * bb * n1) / denom_b, cap(0, 1)));
        g.im23 = Interval::point(detail::clamp_into(
            (stats.p("1", "b") - b * b * n2 - bb * bb * n3) / denom_b, cap(2, 3)));
        g.im02 = Interval::point(detail::clamp_into(
            (b * b * n0 + bb * bb * n2 - stats.p("b", "0")) / denom_b, re02_cap));
        g.im13 = g.im02.negated();

        // Second identified combination, re03 - re12, from the b-basis
        // disturbance; solving the 2x2 system yields both points.
        const double b2bb2 = b * b * bb * bb;
        const double known_b = b2bb2 * (n0 + n3) + bb * bb * bb * bb * n2 + b * b * b * b * n1 -
                               2.0 * bb * bb * bb * b * g.im02.lo - 2.0 * bb * b * b * b * g.im01.lo -
                               2.0 * b * bb * bb * bb * g.im23.lo - 2.0 * b * b * b * bb * g.im13.lo;
        const double diff_0312 = (known_b - stats.p("b", "bbar")) / (2.0 * b2bb2);

        g.re03 = Interval::point(detail::clamp_into(0.5 * (sum_0312 + diff_0312), cap(0, 3)));
        g.re12 = Interval::point(detail::clamp_into(0.5 * (sum_0312 - diff_0312), cap(1, 2)));
    } else {
        g.im01 = Interval::symmetric(cap(0, 1));
        g.im23 = Interval::symmetric(cap(2, 3));
        g.im02 = Interval::symmetric(re02_cap);
        g.im13 = g.im02.negated();

        // re12 is free up to Cauchy-Schwarz; re03 rides on it through the
        // identified sum.  Cutting the re12 range down to values whose re03
        // partner also obeys Cauchy-Schwarz keeps the affine tie intact in
        // the stored intervals: re03.lo + re12.hi recovers the sum exactly.
        Interval r12 = Interval::symmetric(cap(1, 2));
        r12.lo = std::max(r12.lo, sum_0312 - cap(0, 3));
        r12.hi = std::min(r12.hi, sum_0312 + cap(0, 3));
        if (r12.lo > r12.hi) {
            // Unphysical statistics; fall back to the closest admissible point.
            r12 = Interval::point(detail::clamp_into(sum_0312, cap(1, 2)));
        }
        g.re12 = r12;
        g.re03 = {sum_0312 - g.re12.hi, sum_0312 - g.re12.lo};
    }

    g.im03 = Interval::symmetric(cap(0, 3));
    g.im12 = Interval::symmetric(cap(1, 2));
    return g;
}

// Everything the two-way protocol identifies about the attack pair: norms of
// the eight per-branch ancilla states, the four second-hop overlaps, the two
// cross sums, the reflection-channel Gram data, and the linear constraint tying
// the four unknown cross overlaps together.
struct TwoWayGram {
    double alpha = 0.7071067811865475244;

    // pair_norm[x][i][k] = <e^k | e^k> for send x, middle outcome i, final
    // branch k (the ancilla label is 2x+i).
    std::array<std::array<std::array<double, 2>, 2>, 2> pair_norm{};

    // rehop[x][i] = Re<e^0|e^1> within one (send, middle) cell.
    std::array<std::array<double, 2>, 2> rehop{};

    double s0 = 0.0, s1 = 0.0;  // cross sums between the two middle-0 / middle-1 cells
    GramEstimates reflect;      // Gram data of the composed round-trip operator
    double qa = 0.0;
    double c = 0.0;                 // E1 + E2 + E3 + E4
    std::array<double, 4> cap{};    // Cauchy-Schwarz caps |E_i| <= cap[i]

    // Norm pairs in the fixed decomposition order used by the entropy bound.
    double n_first(int idx) const {
        switch (idx) {
            case 0: return pair_norm[0][0][0];
            case 1: return pair_norm[1][0][0];
            case 2: return pair_norm[0][0][1];
            default: return pair_norm[1][0][1];
        }
    }
    double n_second(int idx) const {
        switch (idx) {
            case 0: return pair_norm[1][1][1];
            case 1: return pair_norm[0][1][1];
            case 2: return pair_norm[1][1][0];
            default: return pair_norm[0][1][0];
        }
    }

    // Joint distribution of (middle bit, final bit) over key rounds.
    std::array<std::array<double, 2>, 2> joint_mid_final() const {
        std::array<std::array<double, 2>, 2> joint{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                joint[i][j] = 0.5 * (pair_norm[0][i][j] + pair_norm[1][i][j]);
        return joint;
    }
};

// Inverts two-way statistics.  Only the balanced basis (alpha = 1/sqrt(2)) is
// supported; the statistics identities below are specific to it.
inline TwoWayGram estimate_two_way(const TwoWayStats& tw) {
    if (std::abs(tw.alpha - 0.7071067811865475244) > 1e-9)
        throw domain_error("estimate_two_way: only alpha = 1/sqrt(2) is supported");
    if (tw.qa < 0.0 || tw.qa > 1.0)
        throw domain_error("estimate_two_way: reflected error rate outside [0,1]");

    TwoWayGram g;
    g.alpha = tw.alpha;
    g.qa = tw.qa;

    for (int x = 0; x < 2; ++x)
        for (int i = 0; i < 2; ++i) {
            const double p_mid = tw.forward[x][i];
            for (int k = 0; k < 2; ++k) g.pair_norm[x][i][k] = p_mid * tw.second_z[x][i][k];
            g.rehop[x][i] = p_mid * (tw.second_a[x][i] - 0.5);
        }

    const double pa0 = tw.forward[2][0];
    const double pa1 = tw.forward[2][1];
    g.s0 = 2.0 * pa0 * tw.second_a[2][0] - g.rehop[0][0] - g.rehop[1][0] - pa0;
    g.s1 = 2.0 * pa1 * tw.second_a[2][1] - g.rehop[0][1] - g.rehop[1][1] -
           0.5 * (tw.forward[0][1] + tw.forward[1][1]) + pa0 -
           0.5 * (tw.forward[0][0] + tw.forward[1][0]);

    g.reflect = estimate_one_way(tw.reflect);

    g.c = 1.0 - 2.0 * tw.qa - g.reflect.re01.lo - g.reflect.re23.lo - g.s0 - g.s1;
    for (int idx = 0; idx < 4; ++idx)
        g.cap[idx] = std::sqrt(std::max(0.0, g.n_first(idx) * g.n_second(idx)));
    return g;
}

// Builds the Gram record a symmetric channel pair produces: both directions
// carry Z error q, the disturbance identities all vanish, and the reflected
// error rate qa is supplied by the scenario.
inline TwoWayGram symmetric_two_way_gram(double q, double qa) {
    if (q < 0.0 || q >= 0.5) throw domain_error("symmetric_two_way_gram: q outside [0, 1/2)");
    if (qa < 0.0 || qa > 1.0) throw domain_error("symmetric_two_way_gram: qa outside [0,1]");
    TwoWayGram g;
    g.qa = qa;
    for (int x = 0; x < 2; ++x)
        for (int i = 0; i < 2; ++i) {
            const double p_mid = (x == i) ? 1.0 - q : q;
            g.pair_norm[x][i][0] = p_mid * (i == 0 ? 1.0 - q : q);
            g.pair_norm[x][i][1] = p_mid * (i == 0 ? q : 1.0 - q);
            g.rehop[x][i] = 0.0;
        }
    g.s0 = g.s1 = 0.0;

    g.reflect.psi = PsiMode::Three;
    g.reflect.norm = {1.0 - qa, qa, qa, 1.0 - qa};
    g.reflect.re01 = g.reflect.re23 = g.reflect.re02 = g.reflect.re13 = Interval::point(0.0);
    g.reflect.re12 = Interval::symmetric(qa);
    g.reflect.re03 = {1.0 - 2.0 * qa - g.reflect.re12.hi, 1.0 - 2.0 * qa - g.reflect.re12.lo};
    g.reflect.im01 = Interval::symmetric(g.reflect.cauchy_schwarz_cap(0, 1));
    g.reflect.im23 = Interval::symmetric(g.reflect.cauchy_schwarz_cap(2, 3));
    g.reflect.im02 = Interval::symmetric(g.reflect.cauchy_schwarz_cap(0, 2));
    g.reflect.im13 = g.reflect.im02.negated();
    g.reflect.im03 = Interval::symmetric(g.reflect.cauchy_schwarz_cap(0, 3));
    g.reflect.im12 = Interval::symmetric(g.reflect.cauchy_schwarz_cap(1, 2));

    g.c = 1.0 - 2.0 * qa;
    for (int idx = 0; idx < 4; ++idx)
        g.cap[idx] = std::sqrt(std::max(0.0, g.n_first(idx) * g.n_second(idx)));
    return g;
}

// Result of checking that estimates do not depend on the basis parameters.
struct InvarianceReport {
    bool passed = true;
    double max_deviation = 0.0;
    double alpha_at_worst = 0.0;
    double beta_at_worst = 0.0;
    std::string quantity;
};

// Runs simulate + estimate over a grid of (alpha, beta) choices and verifies
// that every identified quantity agrees across the grid.
inline InvarianceReport alpha_beta_invariance_check(const OneWayAttack& atk, PsiMode psi,
                                                    const std::vector<double>& alphas,
                                                    const std::vector<double>& betas,
                                                    double tol = kEstimateTol) {
    for (double a : alphas)
        if (!(a > 0.0 && a < 1.0))
            throw domain_error("alpha_beta_invariance_check: alpha must lie in (0,1)");
    for (double b : betas)
        if (!(b > 0.0 && b < 1.0))
            throw domain_error("alpha_beta_invariance_check: beta must lie in (0,1)");

    using Named = std::pair<std::string, double>;
    auto extract = [&](const GramEstimates& g) {
        std::vector<Named> vals = {{"norm0", g.norm[0]},   {"norm1", g.norm[1]},
                                   {"norm2", g.norm[2]},   {"norm3", g.norm[3]},
                                   {"re01", g.re01.lo},    {"re23", g.re23.lo},
                                   {"re02", g.re02.lo},    {"re13", g.re13.lo}};
        if (psi == PsiMode::Four) {
            vals.push_back({"im01", g.im01.lo});
            vals.push_back({"im23", g.im23.lo});
            vals.push_back({"im02", g.im02.lo});
            vals.push_back({"im13", g.im13.lo});
            vals.push_back({"re03", g.re03.lo});
            vals.push_back({"re12", g.re12.lo});
        } else {
            vals.push_back({"re03+re12", g.re_sum_03_12()});
        }
        return vals;
    };

    InvarianceReport report;
    std::optional<std::vector<Named>> reference;
    for (double a : alphas) {
        for (double b : betas) {
            BasisConfig cfg{a, b};
            const GramEstimates g = estimate_one_way(simulate_stats(atk, cfg, psi));
            const auto vals = extract(g);
            if (!reference) {
                reference = vals;
                continue;
            }
            for (std::size_t k = 0; k < vals.size(); ++k) {
                const double dev = std::abs(vals[k].second - (*reference)[k].second);
                if (dev > report.max_deviation) {
                    report.max_deviation = dev;
                    report.alpha_at_worst = a;
                    report.beta_at_worst = b;
                    report.quantity = vals[k].first;
                }
            }
        }
    }
    report.passed = report.max_deviation <= tol;
    return report;
}

}  // namespace qkd
