// sqkd.hpp
// Key rate of the two-way protocol with a classical receiver, under reverse
// reconciliation.  The adversary's remaining freedom is four cross overlaps
// tied by one linear constraint and per-pair Cauchy-Schwarz caps; the rate is
// the constrained minimum of the entropy bound minus the observed H(B|A).

#pragma once

#include <limits>

#include "qkd/bound.hpp"
#include "qkd/optimize.hpp"
#include "qkd/report.hpp"
#include "qkd/tomography.hpp"

namespace qkd {

enum class SqkdScenario { Independent, Correlated };

namespace detail {

inline std::vector<double> axis_grid(double cap, int points) {
    if (cap <= 0.0) return {0.0};
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i)
        g[i] = -cap + 2.0 * cap * static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

}  // namespace detail

inline KeyRateReport sqkd_keyrate(const TwoWayGram& g, int grid_points = 41) {
    std::array<double, 4> nf{}, ns{};
    for (int i = 0; i < 4; ++i) {
        nf[i] = g.n_first(i);
        ns[i] = g.n_second(i);
        if (nf[i] < -kCauchyTol || ns[i] < -kCauchyTol)
            throw domain_error("sqkd_keyrate: negative pair norm");
    }

    const double cap_sum = g.cap[1] + g.cap[2] + g.cap[3];
    if (g.c - g.cap[0] > cap_sum + 1e-9 || g.c + g.cap[0] < -cap_sum - 1e-9)
        throw infeasible_error("sqkd_keyrate: constraint set is empty");

    auto objective = [&](const std::vector<double>& e) {
        const double e1 = g.c - e[0] - e[1] - e[2];
        if (std::abs(e1) > g.cap[0] + 1e-12) return std::numeric_limits<double>::infinity();
        for (int i = 0; i < 3; ++i)
            if (std::abs(e[i]) > g.cap[i + 1] + 1e-12)
                return std::numeric_limits<double>::infinity();
        const std::vector<PairTerm> terms = {{nf[0], ns[0], e1},
                                             {nf[1], ns[1], e[0]},
                                             {nf[2], ns[2], e[1]},
                                             {nf[3], ns[3], e[2]}};
        return conditional_entropy_bound(terms).s_lower;
    };

    // Exhaustive grid over the free overlaps, keeping the best few corners for
    // local refinement.
    const auto g2 = detail::axis_grid(g.cap[1], grid_points);
    const auto g3 = detail::axis_grid(g.cap[2], grid_points);
    const auto g4 = detail::axis_grid(g.cap[3], grid_points);
    std::vector<VectorMin> leaders;
    auto consider = [&](const std::vector<double>& x, double v) {
        if (!std::isfinite(v)) return;
        leaders.push_back({x, v});
        std::sort(leaders.begin(), leaders.end(),
                  [](const VectorMin& a, const VectorMin& b) { return a.value < b.value; });
        if (leaders.size() > 5) leaders.pop_back();
    };
    for (double e2 : g2)
        for (double e3 : g3)
            for (double e4 : g4) {
                const std::vector<double> x = {e2, e3, e4};
                consider(x, objective(x));
            }
    if (leaders.empty())
        throw infeasible_error("sqkd_keyrate: constraint set is empty");

    VectorMin best = leaders.front();
    const std::vector<double> lo = {-g.cap[1], -g.cap[2], -g.cap[3]};
    const std::vector<double> hi = {g.cap[1], g.cap[2], g.cap[3]};
    for (const auto& leader : leaders) {
        const VectorMin refined = nelder_mead(objective, leader.x, lo, hi, 0.05, 1e-9, 400);
        if (refined.value < best.value) best = refined;
    }

    const auto joint2 = g.joint_mid_final();
    const std::vector<double> joint = {joint2[0][0], joint2[0][1], joint2[1][0], joint2[1][1]};

    KeyRateReport report;
    report.protocol = "sqkd";
    report.psi = PsiMode::Three;
    report.alpha_key = g.alpha;
    report.entropy_bound = best.value;
    report.cond_shannon = conditional_shannon(joint);
    report.rate = report.entropy_bound - report.cond_shannon;
    const double e1 = g.c - best.x[0] - best.x[1] - best.x[2];
    report.minimizer = {{"E_1", e1}, {"E_2", best.x[0]}, {"E_3", best.x[1]}, {"E_4", best.x[2]}};
    return report;
}

inline KeyRateReport sqkd_symmetric(double q, SqkdScenario scenario) {
    const double qa = scenario == SqkdScenario::Correlated ? q : 2.0 * q * (1.0 - q);
    KeyRateReport report = sqkd_keyrate(symmetric_two_way_gram(q, qa));
    report.minimizer.push_back({"q", q});
    report.minimizer.push_back({"qa", qa});
    return report;
}

// Branch-vector decomposition of an explicit two-way attack in the fixed
// pairing order, for oracle comparisons against exact diagonalization.
inline std::vector<GPair> sqkd_pairs(const TwoWayAttack& atk) {
    return {
        {atk.e_pass(0, 0, 0), atk.e_pass(1, 3, 1)},
        {atk.e_pass(0, 2, 0), atk.e_pass(1, 1, 1)},
        {atk.e_pass(0, 0, 1), atk.e_pass(1, 3, 0)},
        {atk.e_pass(0, 2, 1), atk.e_pass(1, 1, 0)},
    };
}

}  // namespace qkd
