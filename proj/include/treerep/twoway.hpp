#pragma once

#include <cstdint>

namespace treerep {

/// Idealized two-way repeater sharing the tree repeater's spin budget.
struct TwoWayParams {
    std::uint64_t total_qubits = 3 * 385;  ///< 3(m+1) for a tree chain with m stations
    double detector_efficiency = 0.95;
    double distance_km = 1000.0;
    double attenuation_length_km = 20.0;
    double light_speed_fiber = 2e8;  ///< m/s
    double min_spacing_km = 1.0;

    void validate() const;
    static TwoWayParams from_tree_stations(long long stations);
};

/// Expected number of rounds until all l+1 links succeed, each independently
/// with probability p per round:
///   Z_l(p) = sum_{k=1}^{l+1} C(l+1,k) (-1)^{k+1} / (1 - (1-p)^k).
/// Evaluated as E[max of l+1 geometrics] = sum_{t>=0} [1 - (1 - (1-p)^t)^{l+1}],
/// switching to H_{l+1}/lambda + 1/2 (lambda = -ln(1-p)) when the series
/// would need more than a few million terms.
double z_factor(int l, double p);

/// The alternating binomial sum in long double; loses accuracy for large l.
long double z_factor_alternating(int l, long double p);

/// Per-round probability that a link yields at least one pair:
///   1 - (1 - eta_d^2 exp(-L/((l+1) L_att)) / 2)^ceil(Q/(2(l+1))), Q = total qubits.
double link_success(const TwoWayParams& p, int l);

struct TwoWayResult {
    double rate_hz = 0;
    int l = 0;  ///< optimal number of links minus one (odd)
    double p_ent = 0;
    double z = 0;
    int l_max = 0;  ///< largest odd l searched
};

/// r = (l+1) c / (L Z_l(p_ent)), maximized over odd l with L/(l+1) >= min spacing.
TwoWayResult twoway_rate(const TwoWayParams& p);

}  // namespace treerep
