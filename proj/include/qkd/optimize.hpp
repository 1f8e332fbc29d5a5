// optimize.hpp
// Small deterministic minimizers: exhaustive grid scans with golden-section
// refinement in one dimension, and a box-clamped Nelder-Mead simplex for the
// few-parameter searches.  Everything is seeded and evaluation-order fixed.

#pragma once

#include <algorithm>
#include <functional>

#include "qkd/common.hpp"

namespace qkd {

struct ScalarMin {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section descent inside [lo, hi]; assumes a unimodal basin.
inline ScalarMin golden_section(const std::function<double(double)>& f, double lo, double hi,
                                double xtol) {
    constexpr double inv_phi = 0.6180339887498948482;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

// Coarse grid over [lo, hi] followed by golden-section refinement around the
// best cell.  The grid guarantees global coverage; refinement sharpens the
// local minimum.
inline ScalarMin minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                                 int grid_points = 2001, double xtol = 1e-10) {
    if (!(hi >= lo)) throw domain_error("minimize_scalar: empty interval");
    if (hi == lo) return {lo, f(lo)};
    ScalarMin best{lo, f(lo)};
    const double step = (hi - lo) / static_cast<double>(grid_points - 1);
    for (int i = 1; i < grid_points; ++i) {
        const double x = lo + step * i;
        const double v = f(x);
        if (v < best.value) best = {x, v};
    }
    const double a = std::max(lo, best.x - step);
    const double b = std::min(hi, best.x + step);
    const ScalarMin refined = golden_section(f, a, b, xtol);
    return refined.value < best.value ? refined : best;
}

struct VectorMin {
    std::vector<double> x;
    double value = 0.0;
};

// Nelder-Mead with box clamping.  Candidate points are clamped into
// [lo, hi] componentwise before evaluation, so the simplex never leaves the
// feasible box; objectives may still return +infinity to veto a point.
inline VectorMin nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const std::vector<double>& lo,
                             const std::vector<double>& hi, double initial_step = 0.1,
                             double ftol = 1e-9, int max_iter = 400) {
    const std::size_t n = start.size();
    auto clamp = [&](std::vector<double> p) {
        for (std::size_t i = 0; i < n; ++i) p[i] = std::min(hi[i], std::max(lo[i], p[i]));
        return p;
    };

    std::vector<std::vector<double>> simplex(n + 1);
    std::vector<double> fval(n + 1);
    simplex[0] = clamp(std::move(start));
    fval[0] = f(simplex[0]);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = simplex[0];
        const double span = hi[i] - lo[i];
        p[i] += (span > 0.0 ? initial_step * span : initial_step);
        simplex[i + 1] = clamp(std::move(p));
        fval[i + 1] = f(simplex[i + 1]);
    }

    auto centroid_excluding = [&](std::size_t worst) {
        std::vector<double> c(n, 0.0);
        for (std::size_t k = 0; k <= n; ++k) {
            if (k == worst) continue;
            for (std::size_t i = 0; i < n; ++i) c[i] += simplex[k][i];
        }
        for (double& v : c) v /= static_cast<double>(n);
        return c;
    };

    for (int iter = 0; iter < max_iter; ++iter) {
        std::vector<std::size_t> order(n + 1);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t x, std::size_t y) { return fval[x] < fval[y]; });
        const std::size_t best = order[0], worst = order[n];
        if (std::abs(fval[worst] - fval[best]) < ftol) break;

        const auto c = centroid_excluding(worst);
        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t i = 0; i < n; ++i) p[i] = c[i] + t * (simplex[worst][i] - c[i]);
            return clamp(std::move(p));
        };

        const auto reflected = blend(-1.0);
        const double fr = f(reflected);
        if (fr < fval[best]) {
            const auto expanded = blend(-2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                simplex[worst] = expanded;
                fval[worst] = fe;
            } else {
                simplex[worst] = reflected;
                fval[worst] = fr;
            }
            continue;
        }
        if (fr < fval[order[n - 1]]) {
            simplex[worst] = reflected;
            fval[worst] = fr;
            continue;
        }
        const auto contracted = blend(0.5);
        const double fc = f(contracted);
        if (fc < fval[worst]) {
            simplex[worst] = contracted;
            fval[worst] = fc;
            continue;
        }
        for (std::size_t k = 0; k <= n; ++k) {  // shrink toward the best vertex
            if (k == best) continue;
            for (std::size_t i = 0; i < n; ++i)
                simplex[k][i] = simplex[best][i] + 0.5 * (simplex[k][i] - simplex[best][i]);
            fval[k] = f(simplex[k]);
        }
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k <= n; ++k)
        if (fval[k] < fval[best]) best = k;
    return {simplex[best], fval[best]};
}

}  // namespace qkd
