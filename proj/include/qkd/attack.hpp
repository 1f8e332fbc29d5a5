// attack.hpp
// Concrete attack unitaries on the one-way channel and exact forward
// simulation of every statistic the parameter-estimation protocol can tally.

#pragma once

#include "qkd/random.hpp"
#include "qkd/stats.hpp"

namespace qkd {

inline constexpr double kUnitaryTol = 1e-9;

// An attack unitary acting on (qubit x ancilla), restricted to the two columns
// the protocol ever exercises.  Sending |x> leaves the joint system in
// |0, e_{2x}> + |1, e_{2x+1}>; the four ancilla vectors are unnormalized.
struct OneWayAttack {
    std::size_t dim = 0;  // ancilla dimension
    cvec e0, e1, e2, e3;

    const cvec& e(int k) const {
        switch (k) {
            case 0: return e0;
            case 1: return e1;
            case 2: return e2;
            default: return e3;
        }
    }

    // Column norms and orthogonality inherited from unitarity.
    void validate() const {
        if (dim == 0 || e0.size() != dim || e1.size() != dim || e2.size() != dim ||
            e3.size() != dim)
            throw domain_error("OneWayAttack: inconsistent vector dimensions");
        if (std::abs(norm2(e0) + norm2(e1) - 1.0) > kUnitaryTol)
            throw domain_error("OneWayAttack: first column not normalized");
        if (std::abs(norm2(e2) + norm2(e3) - 1.0) > kUnitaryTol)
            throw domain_error("OneWayAttack: second column not normalized");
        if (std::abs(inner(e0, e2) + inner(e1, e3)) > kUnitaryTol)
            throw domain_error("OneWayAttack: columns not orthogonal");
    }
};

// The noiseless channel: |x> passes through untouched, ancilla stays put.
inline OneWayAttack identity_attack(std::size_t dim = 1) {
    OneWayAttack atk;
    atk.dim = dim;
    atk.e0 = atk.e1 = atk.e2 = atk.e3 = cvec(dim);
    atk.e0[0] = 1.0;
    atk.e3[0] = 1.0;
    return atk;
}

// Dilation of the depolarizing channel rho -> (1-2Q) rho + Q I.  Four Kraus
// branches sqrt(1-3Q/2) I, sqrt(Q/2) X, sqrt(Q/2) Y, sqrt(Q/2) Z recorded on a
// 4-dimensional ancilla; the construction needs Q < 2/3.
inline OneWayAttack depolarizing_attack(double q) {
    if (q < 0.0 || q >= 2.0 / 3.0)
        throw domain_error("depolarizing_attack: parameter must lie in [0, 2/3)");
    const double k0 = std::sqrt(1.0 - 1.5 * q);
    const double k = std::sqrt(0.5 * q);
    OneWayAttack atk;
    atk.dim = 4;
    atk.e0 = atk.e1 = atk.e2 = atk.e3 = cvec(4);
    atk.e0[0] = k0;              // I branch keeps |0>
    atk.e0[3] = k;               // Z branch keeps |0>
    atk.e1[1] = k;               // X branch flips to |1>
    atk.e1[2] = complex{0, k};   // Y branch flips to |1> with phase i
    atk.e2[1] = k;               // X branch flips |1> to |0>
    atk.e2[2] = complex{0, -k};  // Y branch, phase -i
    atk.e3[0] = k0;
    atk.e3[3] = -k;  // Z branch flips the sign on |1>
    atk.validate();
    return atk;
}

// Splits columns 0 and d of a full (2d x 2d) unitary into the four ancilla
// vectors, taking the ancilla start state as the first basis vector.
inline OneWayAttack attack_from_unitary(const ComplexMatrix& u, std::size_t dim) {
    if (u.rows() != 2 * dim || u.cols() != 2 * dim)
        throw domain_error("attack_from_unitary: matrix is not 2d x 2d");
    OneWayAttack atk;
    atk.dim = dim;
    atk.e0 = atk.e1 = atk.e2 = atk.e3 = cvec(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        atk.e0[k] = u(k, 0);
        atk.e1[k] = u(dim + k, 0);
        atk.e2[k] = u(k, dim);
        atk.e3[k] = u(dim + k, dim);
    }
    atk.validate();
    return atk;
}

// Haar-distributed attack on an ancilla of dimension d.
inline OneWayAttack random_attack(std::uint64_t seed, std::size_t dim = 4) {
    if (dim < 2) throw domain_error("random_attack: ancilla dimension must be >= 2");
    Rng rng(seed);
    return attack_from_unitary(haar_unitary(2 * dim, rng), dim);
}

// Random attack biased toward the identity: QR of (kappa*I + Gaussian).
// Larger kappa means a milder channel; kappa = 0 recovers the Haar case.
inline OneWayAttack perturbed_identity_attack(std::uint64_t seed, std::size_t dim,
                                              double kappa) {
    if (dim < 2) throw domain_error("perturbed_identity_attack: dimension must be >= 2");
    Rng rng(seed);
    const std::size_t n = 2 * dim;
    ComplexMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.gaussian_complex();
    for (std::size_t i = 0; i < n; ++i) g(i, i) += kappa;

    ComplexMatrix q(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        cvec v = g.column(j);
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i < j; ++i) {
                const cvec qi = q.column(i);
                const complex proj = inner(qi, v);
                for (std::size_t k = 0; k < n; ++k) v[k] -= proj * qi[k];
            }
        const double nrm = std::sqrt(norm2(v));
        if (nrm < 1e-12) throw infeasible_error("perturbed_identity_attack: singular sample");
        for (std::size_t k = 0; k < n; ++k) v[k] /= nrm;
        q.set_column(j, v);
    }
    return attack_from_unitary(q, dim);
}

// Ancilla states attached to the two alpha-basis branches when |a> is sent.
inline std::pair<cvec, cvec> f_states(const OneWayAttack& atk, double alpha) {
    const double a = alpha;
    const double ab = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    cvec f0(atk.dim), f1(atk.dim);
    for (std::size_t k = 0; k < atk.dim; ++k) {
        f0[k] = a * a * atk.e0[k] + a * ab * atk.e2[k] + a * ab * atk.e1[k] +
                ab * ab * atk.e3[k];
        f1[k] = ab * a * atk.e0[k] + ab * ab * atk.e2[k] - a * a * atk.e1[k] -
                a * ab * atk.e3[k];
    }
    return {f0, f1};
}

namespace detail {

// Joint-system branches after the attack, for a send state s0|0> + s1|1>:
// the returned pair (v0, v1) are the ancilla vectors attached to |0> and |1>.
inline std::pair<cvec, cvec> transit_branches(const OneWayAttack& atk, complex s0, complex s1) {
    return {lincomb(s0, atk.e0, s1, atk.e2), lincomb(s0, atk.e1, s1, atk.e3)};
}

struct OutcomeAmp {
    std::string label;
    complex c0, c1;  // conjugated outcome amplitudes on |0>, |1>
};

// Measurement bases available to the receiver, as bra amplitudes.
inline std::vector<std::vector<OutcomeAmp>> receiver_bases(const BasisConfig& cfg,
                                                           PsiMode psi) {
    const double a = cfg.alpha, ab = cfg.abar();
    const double b = cfg.beta, bb = cfg.bbar();
    std::vector<std::vector<OutcomeAmp>> bases;
    bases.push_back({{"0", 1.0, 0.0}, {"1", 0.0, 1.0}});
    bases.push_back({{"a", a, ab}, {"abar", ab, -a}});
    if (psi == PsiMode::Four)
        bases.push_back({{"b", b, complex{0.0, -bb}}, {"bbar", bb, complex{0.0, b}}});
    return bases;
}

struct SendAmp {
    std::string label;
    complex s0, s1;
};

inline std::vector<SendAmp> send_states(const BasisConfig& cfg, PsiMode psi) {
    const double a = cfg.alpha, ab = cfg.abar();
    const double b = cfg.beta, bb = cfg.bbar();
    std::vector<SendAmp> sends = {{"0", 1.0, 0.0}, {"1", 0.0, 1.0}, {"a", a, ab}};
    if (psi == PsiMode::Four) sends.push_back({"b", b, complex{0.0, bb}});
    return sends;
}

}  // namespace detail

// Exact (infinite-sample) conditional statistics of an attack under the
// mismatched-basis estimation protocol.
inline AttackStats simulate_stats(const OneWayAttack& atk, const BasisConfig& cfg,
                                  PsiMode psi) {
    cfg.validate();
    atk.validate();
    AttackStats stats;
    stats.psi = psi;
    stats.alpha = cfg.alpha;
    stats.beta = cfg.beta;
    const auto bases = detail::receiver_bases(cfg, psi);
    for (const auto& send : detail::send_states(cfg, psi)) {
        const auto [v0, v1] = detail::transit_branches(atk, send.s0, send.s1);
        for (const auto& basis : bases)
            for (const auto& out : basis)
                stats.set(send.label, out.label, norm2(lincomb(out.c0, v0, out.c1, v1)));
    }
    return stats;
}

// Multinomial sampling of the estimation protocol: the sender draws uniformly
// from the preparation set, the receiver draws a basis uniformly, and the
// reported statistics are conditional frequencies.  Cells that were never
// visited stay absent.
inline AttackStats simulate_stats_sampled(const OneWayAttack& atk, const BasisConfig& cfg,
                                          PsiMode psi, std::size_t rounds,
                                          std::uint64_t seed) {
    if (rounds < 1) throw domain_error("simulate_stats_sampled: need at least one round");
    cfg.validate();
    atk.validate();
    const auto sends = detail::send_states(cfg, psi);
    const auto bases = detail::receiver_bases(cfg, psi);

    // Outcome distributions per (send, basis).
    std::map<std::pair<std::size_t, std::size_t>, std::array<double, 2>> dist;
    for (std::size_t s = 0; s < sends.size(); ++s) {
        const auto [v0, v1] = detail::transit_branches(atk, sends[s].s0, sends[s].s1);
        for (std::size_t b = 0; b < bases.size(); ++b) {
            const double p0 = norm2(lincomb(bases[b][0].c0, v0, bases[b][0].c1, v1));
            const double p1 = norm2(lincomb(bases[b][1].c0, v0, bases[b][1].c1, v1));
            dist[{s, b}] = {p0, p1};
        }
    }

    Rng rng(seed);
    std::map<std::pair<std::size_t, std::size_t>, std::array<std::size_t, 2>> tally;
    for (std::size_t i = 0; i < rounds; ++i) {
        const std::size_t s = rng.index(sends.size());
        const std::size_t b = rng.index(bases.size());
        const auto& d = dist[{s, b}];
        const std::size_t o = rng.uniform() * (d[0] + d[1]) < d[0] ? 0 : 1;
        tally[{s, b}][o] += 1;
    }

    AttackStats stats;
    stats.psi = psi;
    stats.alpha = cfg.alpha;
    stats.beta = cfg.beta;
    for (const auto& [key, counts] : tally) {
        const auto total = counts[0] + counts[1];
        if (total == 0) continue;
        const auto& [s, b] = key;
        stats.set(sends[s].label, bases[b][0].label,
                  static_cast<double>(counts[0]) / static_cast<double>(total));
        stats.set(sends[s].label, bases[b][1].label,
                  static_cast<double>(counts[1]) / static_cast<double>(total));
    }
    return stats;
}

}  // namespace qkd
