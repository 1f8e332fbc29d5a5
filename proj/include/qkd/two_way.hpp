// two_way.hpp
// Attacks on a two-way channel: a forward unitary hitting the outgoing qubit
// and a reverse unitary hitting the returning one, sharing one ancilla.

#pragma once

#include "qkd/attack.hpp"

namespace qkd {

// Fills in the unspecified columns of a partially given isometry so the whole
// matrix becomes unitary.  Completion is deterministic: standard basis vectors
// are orthogonalized against everything accepted so far.
inline ComplexMatrix complete_unitary(std::size_t n,
                                      const std::vector<std::pair<std::size_t, cvec>>& fixed) {
    ComplexMatrix u(n, n);
    std::vector<bool> specified(n, false);
    std::vector<cvec> basis;
    for (const auto& [j, col] : fixed) {
        u.set_column(j, col);
        specified[j] = true;
        basis.push_back(col);
    }
    std::size_t candidate = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (specified[j]) continue;
        cvec v;
        for (; candidate < n; ++candidate) {
            v = cvec(n);
            v[candidate] = 1.0;
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : basis) {
                    const complex proj = inner(q, v);
                    for (std::size_t k = 0; k < n; ++k) v[k] -= proj * q[k];
                }
            if (norm2(v) > 1e-8) break;
        }
        if (candidate == n) throw infeasible_error("complete_unitary: ran out of candidates");
        ++candidate;
        const double nrm = std::sqrt(norm2(v));
        for (std::size_t k = 0; k < n; ++k) v[k] /= nrm;
        u.set_column(j, v);
        basis.push_back(v);
    }
    return u;
}

struct TwoWayAttack {
    OneWayAttack forward;
    ComplexMatrix reverse;  // 2d x 2d unitary on (qubit x ancilla)

    std::size_t dim() const { return forward.dim; }

    // Ancilla vector attached to the |k> branch after the reverse unitary acts
    // on |i> carrying ancilla state e_j.
    cvec pass_reverse(int branch_k, int qubit_i, const cvec& anc) const {
        const std::size_t d = dim();
        cvec out(d);
        for (std::size_t m = 0; m < d; ++m) {
            complex acc{0.0, 0.0};
            for (std::size_t n = 0; n < d; ++n)
                acc += reverse(static_cast<std::size_t>(branch_k) * d + m,
                               static_cast<std::size_t>(qubit_i) * d + n) *
                       anc[n];
            out[m] = acc;
        }
        return out;
    }

    cvec e_pass(int qubit_i, int label_j, int branch_k) const {
        return pass_reverse(branch_k, qubit_i, forward.e(label_j));
    }

    // The round-trip operator seen on reflection, expressed as a one-way attack.
    OneWayAttack composed() const {
        OneWayAttack v;
        v.dim = dim();
        v.e0 = added(e_pass(0, 0, 0), e_pass(1, 1, 0));
        v.e1 = added(e_pass(0, 0, 1), e_pass(1, 1, 1));
        v.e2 = added(e_pass(0, 2, 0), e_pass(1, 3, 0));
        v.e3 = added(e_pass(0, 2, 1), e_pass(1, 3, 1));
        v.validate();
        return v;
    }

    void validate() const {
        forward.validate();
        if (reverse.rows() != 2 * dim() || reverse.cols() != 2 * dim())
            throw domain_error("TwoWayAttack: reverse unitary has wrong dimension");
        if (reverse.unitarity_residual() > kUnitaryTol)
            throw domain_error("TwoWayAttack: reverse operator not unitary");
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 4; ++j) {
                const double split =
                    norm2(e_pass(i, j, 0)) + norm2(e_pass(i, j, 1)) - norm2(forward.e(j));
                if (std::abs(split) > kUnitaryTol)
                    throw domain_error("TwoWayAttack: reverse action does not preserve norms");
            }
    }
};

inline TwoWayAttack identity_two_way_attack(std::size_t dim = 1) {
    TwoWayAttack atk;
    atk.forward = identity_attack(dim);
    atk.reverse = ComplexMatrix::identity(2 * dim);
    atk.validate();
    return atk;
}

inline TwoWayAttack two_way_attack(OneWayAttack forward, ComplexMatrix reverse) {
    TwoWayAttack atk;
    atk.forward = std::move(forward);
    atk.reverse = std::move(reverse);
    atk.validate();
    return atk;
}

inline TwoWayAttack random_two_way_attack(std::uint64_t seed, std::size_t dim = 4) {
    if (dim < 2) throw domain_error("random_two_way_attack: dimension must be >= 2");
    Rng rng(seed);
    TwoWayAttack atk;
    atk.forward = attack_from_unitary(haar_unitary(2 * dim, rng), dim);
    atk.reverse = haar_unitary(2 * dim, rng);
    atk.validate();
    return atk;
}

// Both directions depolarize independently with the same parameter Q.  The
// ancilla is a 4x4 tensor square: the forward branch records on the first
// factor, the reverse branch on the second, so the two channels never
// interfere and the reflected error rate comes out as 2Q(1-Q).
inline TwoWayAttack independent_depolarizing_two_way(double q) {
    const OneWayAttack base = depolarizing_attack(q);
    const std::size_t d = 16;

    TwoWayAttack atk;
    atk.forward.dim = d;
    atk.forward.e0 = atk.forward.e1 = atk.forward.e2 = atk.forward.e3 = cvec(d);
    for (std::size_t n1 = 0; n1 < 4; ++n1) {
        atk.forward.e0[n1 * 4] = base.e0[n1];
        atk.forward.e1[n1 * 4] = base.e1[n1];
        atk.forward.e2[n1 * 4] = base.e2[n1];
        atk.forward.e3[n1 * 4] = base.e3[n1];
    }

    // 8x8 unitary on (qubit x second factor) realizing the same channel.
    std::vector<std::pair<std::size_t, cvec>> fixed;
    for (int x = 0; x < 2; ++x) {
        cvec col(8);
        for (std::size_t m = 0; m < 4; ++m) {
            col[m] = base.e(2 * x)[m];
            col[4 + m] = base.e(2 * x + 1)[m];
        }
        fixed.push_back({static_cast<std::size_t>(x) * 4, col});
    }
    const ComplexMatrix w = complete_unitary(8, fixed);

    // Lift to (qubit x first x second), identity on the first factor.
    atk.reverse = ComplexMatrix(2 * d, 2 * d);
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t m1 = 0; m1 < 4; ++m1)
            for (std::size_t m2 = 0; m2 < 4; ++m2)
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t n2 = 0; n2 < 4; ++n2)
                        atk.reverse(k * d + m1 * 4 + m2, i * d + m1 * 4 + n2) =
                            w(k * 4 + m2, i * 4 + n2);
    atk.validate();
    return atk;
}

// Exact statistics of one protocol round trip: forward Z outcomes, the
// sender's second-measurement conditionals, reflection statistics of the
// composed operator, and the reflected basis-error rate.
inline TwoWayStats simulate_two_way_stats(const TwoWayAttack& atk, const BasisConfig& cfg) {
    cfg.validate();
    atk.validate();
    const double a = cfg.alpha, ab = cfg.abar();

    TwoWayStats tw;
    tw.alpha = cfg.alpha;

    // Ancilla branch vectors per send; sends indexed {0, 1, a}.
    std::array<std::array<cvec, 2>, 3> branch;
    branch[0] = {atk.forward.e0, atk.forward.e1};
    branch[1] = {atk.forward.e2, atk.forward.e3};
    branch[2] = {lincomb(a, atk.forward.e0, ab, atk.forward.e2),
                 lincomb(a, atk.forward.e1, ab, atk.forward.e3)};

    for (int x = 0; x < 3; ++x)
        for (int i = 0; i < 2; ++i) tw.forward[x][i] = norm2(branch[x][i]);

    for (int x = 0; x < 3; ++x) {
        for (int i = 0; i < 2; ++i) {
            const double p_mid = tw.forward[x][i];
            const cvec y0 = atk.pass_reverse(0, i, branch[x][i]);
            const cvec y1 = atk.pass_reverse(1, i, branch[x][i]);
            if (p_mid < 1e-15) {
                // Unreachable cell; conventions keep conditionals normalized.
                if (x < 2) tw.second_z[x][i] = {i == 0 ? 1.0 : 0.0, i == 1 ? 1.0 : 0.0};
                tw.second_a[x][i] = 0.5;
                continue;
            }
            if (x < 2) tw.second_z[x][i] = {norm2(y0) / p_mid, norm2(y1) / p_mid};
            tw.second_a[x][i] = norm2(lincomb(a, y0, ab, y1)) / p_mid;
        }
    }

    tw.reflect = simulate_stats(atk.composed(), cfg, PsiMode::Three);
    tw.qa = tw.reflect.p("a", "abar");
    return tw;
}

}  // namespace qkd
