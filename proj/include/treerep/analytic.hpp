#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "treerep/timing.hpp"
#include "treerep/tree.hpp"

namespace treerep {

/// Exact integer power by squaring; ipow(0, 0) == 1.
template <typename Scalar>
Scalar ipow(Scalar base, long long exponent) {
    Scalar result(1);
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

/// Fiber link between neighbouring stations.
struct ChannelParams {
    double station_spacing_km = 2.6;
    double attenuation_length_km = 20.0;
    double detector_efficiency = 0.95;
    double total_distance_km = 1000.0;

    void validate() const;
};

/// Per-photon loss for one hop: mu = 1 - eta * eta_d with eta = exp(-L0 / L_att).
struct LossModel {
    double eta = 1.0;
    double mu = 0.0;

    static LossModel from_channel(double spacing_km, double attenuation_length_km, double detector_efficiency);
};

/// Probabilities of a successful indirect z measurement, R[k] for a qubit on
/// level k (1 <= k <= depth+1), from
///   R_k = 1 - (1 - (1-mu)(1-mu+mu R_{k+2})^{b_{k+1}})^{b_k}
/// with b and R set to zero past the leaves. Index 0 is unused.
template <typename Scalar>
std::vector<Scalar> indirect_z_probs(const BranchingVector& t, Scalar mu) {
    const int leaves = t.depth();
    std::vector<Scalar> R(static_cast<std::size_t>(leaves) + 3, Scalar(0));
    const Scalar keep = Scalar(1) - mu;
    for (int k = leaves; k >= 1; --k) {
        const Scalar grandchild_z = keep + mu * R[static_cast<std::size_t>(k) + 2];
        const Scalar via_child = keep * ipow(grandchild_z, t.branching_at(k + 1));
        R[static_cast<std::size_t>(k)] = Scalar(1) - ipow(Scalar(1) - via_child, t.branching_at(k));
    }
    return R;
}

/// R_k for 1 <= k <= depth+1. Throws std::out_of_range otherwise.
template <typename Scalar>
Scalar indirect_z_prob(const BranchingVector& t, Scalar mu, int k) {
    if (k < 1 || k > t.depth() + 1) throw std::out_of_range("level outside 1..depth+1");
    return indirect_z_probs(t, mu)[static_cast<std::size_t>(k)];
}

/// Probability that the logical qubit survives one hop:
///   eta_e = ((1-mu+mu R1)^{b0} - (mu R1)^{b0}) (1-mu+mu R2)^{b1},
/// with b1 = 0 for a depth-1 tree.
template <typename Scalar>
Scalar encoded_transmission(const BranchingVector& t, Scalar mu) {
    const auto R = indirect_z_probs(t, mu);
    const Scalar keep = Scalar(1) - mu;
    const Scalar first = ipow(keep + mu * R[1], t[0]) - ipow(mu * R[1], t[0]);
    return first * ipow(keep + mu * R[2], t.branching_at(1));
}

/// p_trans = eta_e^{m+1} over m intermediate stations.
template <typename Scalar>
Scalar chain_transmission(Scalar eta_e, long long stations) {
    return ipow(eta_e, stations + 1);
}

/// eps_trans = 1 - (1 - eps_r)^{m+1}.
template <typename Scalar>
Scalar accumulated_error(Scalar eps_r, long long stations) {
    using std::expm1;
    using std::log1p;
    if (eps_r >= Scalar(1)) return Scalar(1);
    return -expm1(Scalar(stations + 1) * log1p(-eps_r));
}

/// First-order form (m+1) eps_r.
template <typename Scalar>
Scalar accumulated_error_linear(Scalar eps_r, long long stations) {
    return Scalar(stations + 1) * eps_r;
}

/// h(x) in bits with h(0) = h(1) = 0.
template <typename Scalar>
Scalar binary_entropy(Scalar x) {
    using std::log2;
    if (x <= Scalar(0) || x >= Scalar(1)) return Scalar(0);
    return -x * log2(x) - (Scalar(1) - x) * log2(Scalar(1) - x);
}

/// Six-state protocol secret fraction
///   f = 1 - h(Q) - Q - (1-Q) h((1 - 3Q/2)/(1-Q)),
/// defined for 0 <= Q <= 2/3; may be negative. Throws std::domain_error outside.
template <typename Scalar>
Scalar secret_fraction(Scalar Q) {
    if (!(Q >= Scalar(0)) || Q > Scalar(2) / Scalar(3)) {
        throw std::domain_error("qubit error rate outside [0, 2/3]");
    }
    const Scalar one(1);
    const Scalar inner = Q < one ? (one - Scalar(3) * Q / Scalar(2)) / (one - Q) : Scalar(0);
    return one - binary_entropy(Q) - Q - (one - Q) * binary_entropy(inner);
}

/// Q = 2 eps_trans / 3 for a depolarizing channel.
template <typename Scalar>
Scalar qber_from_eps(Scalar eps_trans) {
    return Scalar(2) * eps_trans / Scalar(3);
}

/// Rough reach before accumulated errors kill the key: 0.13 L0 / eps_r (km).
/// Infinite for eps_r == 0.
template <typename Scalar>
Scalar distance_limit(Scalar spacing_km, Scalar eps_r) {
    if (eps_r <= Scalar(0)) return std::numeric_limits<Scalar>::infinity();
    return Scalar(0.13) * spacing_km / eps_r;
}

/// Probability that at least one of n photons sent straight down the fiber is
/// detected: 1 - (1 - eta_d exp(-L/L_att))^n.
template <typename Scalar>
Scalar direct_transmission(long long photons, Scalar eta_d, Scalar distance_km, Scalar attenuation_length_km) {
    using std::exp;
    using std::expm1;
    using std::log1p;
    const Scalar single = eta_d * exp(-distance_km / attenuation_length_km);
    if (single >= Scalar(1)) return Scalar(1);
    return -expm1(Scalar(photons) * log1p(-single));
}

/// Everything the optimizer needs about the repeater chain apart from the
/// tree and the number of stations.
struct RepeaterParams {
    double detector_efficiency = 0.95;
    double attenuation_length_km = 20.0;
    TimingParams timing;
    double eps_r = 3e-4;
    std::uint64_t max_photons = 300;
    double min_spacing_km = 1.0;
    int max_depth = 4;

    void validate() const;
};

/// All intermediate quantities of one (tree, m, L) evaluation.
struct RateResult {
    double spacing_km = 0;
    double eta = 0;        ///< bare fiber transmission per hop
    double mu = 0;         ///< effective per-photon loss
    double R1 = 0;         ///< indirect z probability, level 1
    double R2 = 0;         ///< indirect z probability, level 2
    double eta_e = 0;
    double p_trans = 0;
    double eps_trans = 0;
    double Q = 0;
    double secret_fraction = 0;  ///< kept signed; negative means no key
    double r0 = 0;               ///< Hz
    double secret_rate = 0;      ///< r0 f p_trans, Hz
    double cost = 0;             ///< +inf when no key can be extracted
    bool feasible = false;
};

/// Evaluates the chain for tree `t`, `stations` intermediate stations over
/// `distance_km`. Cost is
///   C = 1/(r0 f p_trans) * m L_att / (tau_ph L),
/// reported as +inf when f <= 0 or p_trans == 0.
RateResult cost_parameter(const RepeaterParams& params, const BranchingVector& t, long long stations,
                          double distance_km);

}  // namespace treerep
