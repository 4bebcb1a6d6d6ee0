#include "treerep/gate_model.hpp"

#include <cmath>
#include <stdexcept>

namespace treerep {

void CavityParams::validate() const {
    if (!(cooperativity > 0)) throw std::invalid_argument("cooperativity must be positive");
    if (!(kappa_in > 0)) throw std::invalid_argument("kappa_in must be positive");
    if (!(kappa_loss >= 0)) throw std::invalid_argument("kappa_loss must be non-negative");
    if (!(detector_efficiency >= 0 && detector_efficiency <= 1)) {
        throw std::invalid_argument("detector efficiency must lie in [0, 1]");
    }
    if (!(mode_matching >= 0 && mode_matching <= 1)) throw std::invalid_argument("mode matching must lie in [0, 1]");
}

void QubitAmplitudes::validate() const {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12) {
        throw std::invalid_argument("qubit amplitudes are not normalized");
    }
}

double reflection_coefficient(const CavityParams& p, int n1) {
    if (n1 != 0 && n1 != 1) throw std::invalid_argument("n1 must be 0 or 1");
    const double c4 = 4.0 * p.cooperativity * n1;
    return (1.0 - 2.0 * p.kappa_in / p.kappa() + c4) / (1.0 + c4);
}

Eigen::Vector4cd heralded_state(const CavityParams& p, const QubitAmplitudes& q) {
    const double s0 = reflection_coefficient(p, 0);
    const double s1 = reflection_coefficient(p, 1);
    // Basis |photon, spin>: 00, 01, 10, 11.
    Eigen::Vector4cd psi;
    psi << q.alpha * s0, q.alpha * s0, q.beta * s0, q.beta * s1;
    return psi / std::sqrt(2.0);
}

TransferFidelity heralded_transfer(const CavityParams& p, const QubitAmplitudes& q) {
    p.validate();
    q.validate();
    const Eigen::Vector4cd unnormalized = heralded_state(p, q);
    const double norm2 = unnormalized.squaredNorm();

    TransferFidelity out;
    out.success_probability = p.detector_efficiency * norm2;
    if (norm2 == 0.0) return out;

    Eigen::Vector4cd ideal;
    ideal << -q.alpha, -q.alpha, -q.beta, q.beta;
    ideal /= std::sqrt(2.0);
    out.fidelity = std::norm(unnormalized.dot(ideal)) / norm2;
    return out;
}

ExpandedTransfer expanded_error(const CavityParams& p, const QubitAmplitudes& q) {
    const double a2 = std::norm(q.alpha);
    const double b2 = std::norm(q.beta);
    const double r = p.kappa_loss / p.kappa_in;
    const double C = p.cooperativity;
    ExpandedTransfer out;
    out.error = (1.0 + a2) * b2 * (r * r - r / (2.0 * C) + 1.0 / (16.0 * C * C));
    out.success_probability = p.detector_efficiency * (1.0 - 2.0 * (1.0 + a2) * r - b2 / (2.0 * C));
    return out;
}

double bandwidth_error_bound(double sigma_ph_over_c_gamma) {
    if (!(sigma_ph_over_c_gamma >= 0)) throw std::invalid_argument("bandwidth ratio must be non-negative");
    return sigma_ph_over_c_gamma * sigma_ph_over_c_gamma;
}

double mode_matching_error(double eta_mm) {
    if (!(eta_mm >= 0 && eta_mm <= 1)) throw std::invalid_argument("mode matching must lie in [0, 1]");
    return (1.0 - eta_mm) * (1.0 - eta_mm);
}

}  // namespace treerep
