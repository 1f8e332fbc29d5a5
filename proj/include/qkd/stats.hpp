// stats.hpp
// Observable channel statistics: the probabilities the two parties can tally
// during parameter estimation, for one-way and two-way channels.

#pragma once

#include <array>
#include <map>
#include <string>

#include "qkd/common.hpp"

namespace qkd {

// Preparation sets: three states {|0>,|1>,|a>} or four {|0>,|1>,|a>,|b>}.
enum class PsiMode { Three, Four };

inline int psi_count(PsiMode m) { return m == PsiMode::Three ? 3 : 4; }

// The two tunable measurement/preparation bases.  |a> = alpha|0> + abar|1>,
// |b> = beta|0> + i*bbar|1>; the conjugate states complete each basis.
struct BasisConfig {
    double alpha = 0.7071067811865475244;
    double beta = 0.7071067811865475244;

    double abar() const { return std::sqrt(std::max(0.0, 1.0 - alpha * alpha)); }
    double bbar() const { return std::sqrt(std::max(0.0, 1.0 - beta * beta)); }

    void validate() const {
        if (alpha < 0.0 || alpha > 1.0 || beta < 0.0 || beta > 1.0)
            throw domain_error("BasisConfig: alpha and beta must lie in [0,1]");
    }
};

// Conditional outcome probabilities keyed by (sent label, outcome label).
// Sent labels: "0", "1", "a", "b".  Outcome labels: "0", "1", "a", "abar",
// "b", "bbar".  Each probability is conditioned on the receiver measuring in
// the outcome's basis.
struct AttackStats {
    PsiMode psi = PsiMode::Four;
    double alpha = 0.7071067811865475244;
    double beta = 0.7071067811865475244;
    std::map<std::pair<std::string, std::string>, double> entries;

    bool has(const std::string& sent, const std::string& outcome) const {
        return entries.count({sent, outcome}) > 0;
    }

    double p(const std::string& sent, const std::string& outcome) const {
        auto it = entries.find({sent, outcome});
        if (it == entries.end())
            throw infeasible_error("AttackStats: missing statistic p(" + sent + "," + outcome +
                                   ")");
        return it->second;
    }

    void set(const std::string& sent, const std::string& outcome, double value) {
        entries[{sent, outcome}] = value;
    }

    // Drops every statistic involving the second estimation basis, producing
    // the view available when only three states are prepared.
    AttackStats restricted_to_psi3() const {
        AttackStats out;
        out.psi = PsiMode::Three;
        out.alpha = alpha;
        out.beta = beta;
        for (const auto& [key, value] : entries) {
            const auto& [sent, outcome] = key;
            if (sent == "b" || outcome == "b" || outcome == "bbar") continue;
            out.entries[key] = value;
        }
        return out;
    }
};

// Statistics of one round trip through a two-way channel.  The receiver in the
// middle only ever measures in the Z basis; the sender measures the returning
// qubit in Z or in the alpha basis.
struct TwoWayStats {
    double alpha = 0.7071067811865475244;

    // forward[x][i]: probability the middle party measures |i> when |x> was
    // sent; x indexes {0, 1, a}.
    std::array<std::array<double, 2>, 3> forward{};

    // second_z[x][i][j]: sender's final Z outcome |j> given send x in {0,1}
    // and middle outcome |i>.
    std::array<std::array<std::array<double, 2>, 2>, 2> second_z{};

    // second_a[x][i]: probability the final measurement yields |a>, given
    // send x in {0, 1, a} and middle outcome |i>.
    std::array<std::array<double, 2>, 3> second_a{};

    // Statistics of the composed round-trip operator observed on reflection.
    AttackStats reflect;

    // Probability that a reflected |a> returns as its orthogonal complement.
    double qa = 0.0;

    static int send_index(const std::string& sent) {
        if (sent == "0") return 0;
        if (sent == "1") return 1;
        if (sent == "a") return 2;
        throw domain_error("TwoWayStats: unknown send label " + sent);
    }
};

}  // namespace qkd
