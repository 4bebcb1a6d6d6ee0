#include "treerep/twoway.hpp"

#include <cmath>
#include <stdexcept>

namespace treerep {

void TwoWayParams::validate() const {
    if (total_qubits < 3) throw std::invalid_argument("two-way qubit budget must be at least 3");
    if (!(detector_efficiency >= 0 && detector_efficiency <= 1)) {
        throw std::invalid_argument("detector efficiency must lie in [0, 1]");
    }
    if (!(distance_km > 0)) throw std::invalid_argument("distance must be positive");
    if (!(attenuation_length_km > 0)) throw std::invalid_argument("attenuation length must be positive");
    if (!(light_speed_fiber > 0)) throw std::invalid_argument("light speed must be positive");
    if (!(min_spacing_km > 0)) throw std::invalid_argument("minimum spacing must be positive");
}

TwoWayParams TwoWayParams::from_tree_stations(long long stations) {
    if (stations < 0) throw std::invalid_argument("station count must be non-negative");
    TwoWayParams p;
    p.total_qubits = 3 * static_cast<std::uint64_t>(stations + 1);
    return p;
}

double z_factor(int l, double p) {
    if (l < 1) throw std::invalid_argument("l must be at least 1");
    if (!(p > 0 && p <= 1)) throw std::invalid_argument("p must lie in (0, 1]");
    if (p == 1) return 1.0;

    const double links = l + 1.0;
    const double lambda = -std::log1p(-p);
    const double needed = (std::log(links) + 40.0) / lambda;
    if (needed > 4e6) {
        double harmonic = 0;
        for (int k = 1; k <= l + 1; ++k) harmonic += 1.0 / k;
        return harmonic / lambda + 0.5;
    }

    double sum = 1.0;  // t = 0
    for (long long t = 1;; ++t) {
        const double miss = std::exp(-lambda * static_cast<double>(t));
        const double term = -std::expm1(links * std::log1p(-miss));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

long double z_factor_alternating(int l, long double p) {
    if (l < 1) throw std::invalid_argument("l must be at least 1");
    if (!(p > 0 && p <= 1)) throw std::invalid_argument("p must lie in (0, 1]");
    const int n = l + 1;
    long double binom = 1;
    long double sum = 0;
    for (int k = 1; k <= n; ++k) {
        binom = binom * static_cast<long double>(n - k + 1) / static_cast<long double>(k);
        const long double fail_all = -std::expm1(static_cast<long double>(k) * std::log1p(-p));
        sum += (k % 2 ? binom : -binom) / fail_all;
    }
    return sum;
}

double link_success(const TwoWayParams& p, int l) {
    p.validate();
    if (l < 1) throw std::invalid_argument("l must be at least 1");
    const double links = l + 1.0;
    const double single = 0.5 * p.detector_efficiency * p.detector_efficiency *
                          std::exp(-p.distance_km / (links * p.attenuation_length_km));
    const double attempts = std::ceil(static_cast<double>(p.total_qubits) / (2.0 * links));
    if (single >= 1) return 1.0;
    return -std::expm1(attempts * std::log1p(-single));
}

TwoWayResult twoway_rate(const TwoWayParams& p) {
    p.validate();
    const double max_links = std::floor(p.distance_km / p.min_spacing_km);
    if (max_links < 2) throw std::invalid_argument("distance too short for two links at the minimum spacing");
    int l_max = static_cast<int>(max_links) - 1;
    if (l_max % 2 == 0) --l_max;

    TwoWayResult best;
    best.l_max = l_max;
    for (int l = 1; l <= l_max; l += 2) {
        const double pe = link_success(p, l);
        if (!(pe > 0)) continue;
        const double z = z_factor(l, pe);
        const double rate = (l + 1.0) * p.light_speed_fiber / (p.distance_km * 1000.0 * z);
        if (rate > best.rate_hz) {
            best.rate_hz = rate;
            best.l = l;
            best.p_ent = pe;
            best.z = z;
        }
    }
    return best;
}

}  // namespace treerep
