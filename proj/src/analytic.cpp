#include "treerep/analytic.hpp"

namespace treerep {

void ChannelParams::validate() const {
    if (!(station_spacing_km > 0) || !(station_spacing_km <= total_distance_km)) {
        throw std::invalid_argument("station spacing must satisfy 0 < L0 <= L");
    }
    if (!(attenuation_length_km > 0)) throw std::invalid_argument("attenuation length must be positive");
    if (!(detector_efficiency >= 0 && detector_efficiency <= 1)) {
        throw std::invalid_argument("detector efficiency must lie in [0, 1]");
    }
}

LossModel LossModel::from_channel(double spacing_km, double attenuation_length_km, double detector_efficiency) {
    LossModel m;
    m.eta = std::exp(-spacing_km / attenuation_length_km);
    m.mu = 1.0 - m.eta * detector_efficiency;
    return m;
}

void RepeaterParams::validate() const {
    timing.validate();
    if (!(detector_efficiency >= 0 && detector_efficiency <= 1)) {
        throw std::invalid_argument("detector efficiency must lie in [0, 1]");
    }
    if (!(attenuation_length_km > 0)) throw std::invalid_argument("attenuation length must be positive");
    if (!(eps_r >= 0 && eps_r < 1)) throw std::invalid_argument("re-encoding error must lie in [0, 1)");
    if (max_photons < 2) throw std::invalid_argument("photon cap must be at least 2");
    if (!(min_spacing_km > 0)) throw std::invalid_argument("minimum spacing must be positive");
    if (max_depth < 1) throw std::invalid_argument("maximum depth must be at least 1");
}

RateResult cost_parameter(const RepeaterParams& params, const BranchingVector& t, long long stations,
                          double distance_km) {
    if (stations < 0) throw std::invalid_argument("station count must be non-negative");
    if (!(distance_km > 0)) throw std::invalid_argument("distance must be positive");

    RateResult r;
    r.spacing_km = distance_km / static_cast<double>(stations + 1);
    const auto loss = LossModel::from_channel(r.spacing_km, params.attenuation_length_km, params.detector_efficiency);
    r.eta = loss.eta;
    r.mu = loss.mu;
    const auto R = indirect_z_probs(t, loss.mu);
    r.R1 = R[1];
    r.R2 = R[2];
    r.eta_e = encoded_transmission(t, loss.mu);
    r.p_trans = chain_transmission(r.eta_e, stations);
    r.eps_trans = accumulated_error(params.eps_r, stations);
    r.Q = qber_from_eps(r.eps_trans);
    r.secret_fraction = secret_fraction(r.Q);
    r.r0 = repetition_rate(t, params.timing);
    r.secret_rate = r.r0 * r.secret_fraction * r.p_trans;

    r.feasible = r.secret_fraction > 0 && r.p_trans > 0;
    if (r.feasible) {
        r.cost = (1.0 / r.secret_rate) * (static_cast<double>(stations) * params.attenuation_length_km) /
                 (params.timing.tau_ph * distance_km);
        if (!std::isfinite(r.cost)) r.feasible = false;
    }
    if (!r.feasible) r.cost = std::numeric_limits<double>::infinity();
    return r;
}

}  // namespace treerep
