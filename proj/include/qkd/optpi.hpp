// optpi.hpp
// Key rate of the four-parameter protocol: the sender encodes with a pair of
// tilted states, the receiver decodes with another pair, and both tilts are
// free.  A multi-start search over the four parameters finds the encoding
// that maximizes the rate for a given channel.

#pragma once

#include <limits>

#include "qkd/bound.hpp"
#include "qkd/optimize.hpp"
#include "qkd/report.hpp"
#include "qkd/tomography.hpp"

namespace qkd {

struct OptPiParams {
    double alpha_s = 1.0;  // key 0 send amplitude on |0>
    double gamma_s = 0.0;  // key 1 send amplitude on |0>
    double alpha_r = 1.0;  // key 0 accept amplitude on |0>
    double gamma_r = 0.0;  // key 1 accept amplitude on |0>

    double beta_s() const { return std::sqrt(std::max(0.0, 1.0 - alpha_s * alpha_s)); }
    double delta_s() const { return std::sqrt(std::max(0.0, 1.0 - gamma_s * gamma_s)); }
    double beta_r() const { return std::sqrt(std::max(0.0, 1.0 - alpha_r * alpha_r)); }
    double delta_r() const { return std::sqrt(std::max(0.0, 1.0 - gamma_r * gamma_r)); }

    void validate() const {
        for (double v : {alpha_s, gamma_s, alpha_r, gamma_r})
            if (v < -1.0 || v > 1.0)
                throw domain_error("OptPiParams: parameters must lie in [-1,1]");
    }

    static OptPiParams bb84() { return {1.0, 0.0, 1.0, 0.0}; }
};

namespace detail {

struct OptPiDecomposition {
    PairTerm matched;           // both parties output the same bit
    PairTerm crossed;           // outputs disagree
    std::vector<double> joint;  // P(A=i, B=j)
    bool physical = true;
};

inline OptPiDecomposition optpi_decomposition(const GramEstimates& g,
                                              const std::array<double, 4>& n,
                                              const OptPiParams& p, double re03, double re12) {
    const double as = p.alpha_s, bs = p.beta_s(), gs = p.gamma_s, ds = p.delta_s();
    const double ar = p.alpha_r, br = p.beta_r(), gr = p.gamma_r, dr = p.delta_r();
    const double p00 = n[0], p01 = n[1], p10 = n[2], p11 = n[3];
    const double re01 = g.re01.mid(), re23 = g.re23.mid();
    const double re02 = g.re02.mid(), re13 = g.re13.mid();

    // Branch norms and overlaps of the two send states after the attack.
    const double f00 = as * as * p00 + bs * bs * p10 + 2.0 * as * bs * re02;
    const double f11 = as * as * p01 + bs * bs * p11 + 2.0 * as * bs * re13;
    const double f22 = gs * gs * p00 + ds * ds * p10 + 2.0 * gs * ds * re02;
    const double f33 = gs * gs * p01 + ds * ds * p11 + 2.0 * gs * ds * re13;
    const double rf01 = as * as * re01 + as * bs * (re03 + re12) + bs * bs * re23;
    const double rf23 = gs * gs * re01 + gs * ds * (re03 + re12) + ds * ds * re23;

    OptPiDecomposition d;
    d.matched.n0 = std::max(0.0, ar * ar * f00 + br * br * f11 + 2.0 * ar * br * rf01);
    d.matched.n1 = std::max(0.0, gr * gr * f22 + dr * dr * f33 + 2.0 * gr * dr * rf23);
    d.crossed.n0 = std::max(0.0, gr * gr * f00 + dr * dr * f11 + 2.0 * gr * dr * rf01);
    d.crossed.n1 = std::max(0.0, ar * ar * f22 + br * br * f33 + 2.0 * ar * br * rf23);

    const double rf02 = as * gs * p00 + (as * ds + bs * gs) * re02 + bs * ds * p10;
    const double rf03 = as * gs * re01 + as * ds * re03 + bs * gs * re12 + bs * ds * re23;
    const double rf12 = as * gs * re01 + as * ds * re12 + bs * gs * re03 + bs * ds * re23;
    const double rf13 = as * gs * p01 + (as * ds + bs * gs) * re13 + bs * ds * p11;

    d.matched.re_overlap = ar * gr * rf02 + ar * dr * rf03 + br * gr * rf12 + br * dr * rf13;
    d.crossed.re_overlap = ar * gr * rf02 + br * gr * rf03 + ar * dr * rf12 + br * dr * rf13;

    for (PairTerm* t : {&d.matched, &d.crossed}) {
        const double cap = std::sqrt(std::max(0.0, t->n0 * t->n1));
        if (std::abs(t->re_overlap) > cap + kCauchyTol) {
            d.physical = false;
        } else {
            t->re_overlap = std::min(cap, std::max(-cap, t->re_overlap));
        }
    }

    const double total = d.matched.n0 + d.matched.n1 + d.crossed.n0 + d.crossed.n1;
    if (total > 0.0)
        d.joint = {d.matched.n0 / total, d.crossed.n0 / total, d.crossed.n1 / total,
                   d.matched.n1 / total};
    return d;
}

}  // namespace detail

inline KeyRateReport optpi_keyrate(const GramEstimates& gram, const AttackStats& stats,
                                   const OptPiParams& params) {
    params.validate();
    const std::array<double, 4> norms = {stats.p("0", "0"), stats.p("0", "1"),
                                         stats.p("1", "0"), stats.p("1", "1")};
    for (int i = 0; i < 4; ++i)
        if (std::abs(norms[i] - gram.norm[i]) > 1e-6)
            throw domain_error("optpi_keyrate: gram norms inconsistent with statistics");

    const double sum_0312 = gram.re_sum_03_12();
    auto decompose = [&](double re12) {
        return detail::optpi_decomposition(gram, norms, params, sum_0312 - re12, re12);
    };
    auto objective = [&](double re12) {
        const auto d = decompose(re12);
        if (!d.physical) return std::numeric_limits<double>::infinity();
        const double total = d.matched.n0 + d.matched.n1 + d.crossed.n0 + d.crossed.n1;
        if (total <= 0.0) return std::numeric_limits<double>::infinity();
        return conditional_entropy_bound({d.matched, d.crossed}).s_lower;
    };

    ScalarMin best;
    if (gram.re12.is_point()) {
        best = {gram.re12.lo, objective(gram.re12.lo)};
    } else {
        best = minimize_scalar(objective, gram.re12.lo, gram.re12.hi);
    }
    if (!std::isfinite(best.value))
        throw infeasible_error("optpi_keyrate: all-inconclusive configuration");

    const auto at_best = decompose(best.x);
    if (at_best.joint.empty())
        throw infeasible_error("optpi_keyrate: all-inconclusive configuration");

    KeyRateReport report;
    report.protocol = "optpi";
    report.psi = gram.psi;
    report.alpha_key = params.alpha_s;
    report.entropy_bound = best.value;
    report.cond_shannon = conditional_shannon(at_best.joint);
    report.rate = report.entropy_bound - report.cond_shannon;
    report.minimizer = {{"alpha_s", params.alpha_s}, {"gamma_s", params.gamma_s},
                        {"alpha_r", params.alpha_r}, {"gamma_r", params.gamma_r},
                        {"re_12", best.x},           {"re_03", sum_0312 - best.x}};
    return report;
}

// Multi-start maximization of the rate over the four protocol parameters.
// Starts are the standard Z encoding plus seeded uniform draws; each start is
// polished with the simplex search under a shared evaluation budget.
inline std::pair<OptPiParams, KeyRateReport> optpi_optimize(const GramEstimates& gram,
                                                            const AttackStats& stats,
                                                            std::size_t budget = 20000,
                                                            std::uint64_t seed = 1,
                                                            int starts = 64) {
    if (budget < 1) throw domain_error("optpi_optimize: budget must be positive");
    std::size_t used = 0;
    auto objective = [&](const std::vector<double>& x) {
        ++used;
        OptPiParams p{x[0], x[1], x[2], x[3]};
        try {
            return -optpi_keyrate(gram, stats, p).rate;
        } catch (const infeasible_error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    const std::vector<double> lo(4, -1.0), hi(4, 1.0);
    Rng rng(seed);
    std::vector<std::vector<double>> start_points = {{1.0, 0.0, 1.0, 0.0}};
    for (int s = 0; s < starts; ++s)
        start_points.push_back({2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0,
                                2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0});

    VectorMin best{start_points[0], objective(start_points[0])};
    for (const auto& start : start_points) {
        if (used >= budget) break;
        const int iter_cap = static_cast<int>(
            std::min<std::size_t>(200, (budget - used) / 6 + 1));
        const VectorMin local = nelder_mead(objective, start, lo, hi, 0.15, 1e-9, iter_cap);
        if (local.value < best.value) best = local;
    }

    const OptPiParams params{best.x[0], best.x[1], best.x[2], best.x[3]};
    return {params, optpi_keyrate(gram, stats, params)};
}

}  // namespace qkd
