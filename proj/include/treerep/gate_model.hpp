#pragma once

#include <complex>

#include <Eigen/Dense>

namespace treerep {

/// One-sided cavity with an emitter, used for the heralded spin-photon CZ.
/// Rates share an arbitrary unit.
struct CavityParams {
    double cooperativity = 100.0;
    double kappa_in = 1.0;
    double kappa_loss = 0.01;
    double detector_efficiency = 1.0;
    double mode_matching = 1.0;

    double kappa() const { return kappa_in + kappa_loss; }
    void validate() const;
};

/// alpha|0> + beta|1>, normalized.
struct QubitAmplitudes {
    std::complex<double> alpha{1.0, 0.0};
    std::complex<double> beta{0.0, 0.0};

    /// Throws std::invalid_argument unless |alpha|^2 + |beta|^2 = 1 within 1e-12.
    void validate() const;
};

/// Reflection amplitude s(n1) = (1 - 2 kappa_in/kappa + 4 C n1) / (1 + 4 C n1)
/// for the emitter in |n1>, n1 in {0, 1}.
double reflection_coefficient(const CavityParams& p, int n1);

struct TransferFidelity {
    double fidelity = 0;
    double success_probability = 0;
};

/// Exact heralded photon-to-spin transfer. The photon's early bin scatters,
/// the spin is rotated, then the late bin scatters; conditioning on a click
/// gives
///   |psi> ~ alpha|0>(s0|0>_s + s0|1>_s) + beta|1>(s1|1>_s + s0|0>_s),
/// compared against the ideal -alpha|0>(|0>+|1>) + beta|1>(|1>-|0>).
TransferFidelity heralded_transfer(const CavityParams& p, const QubitAmplitudes& q);

/// The same two quantities to leading order in 1/C and kappa_loss/kappa_in.
struct ExpandedTransfer {
    double error = 0;  ///< approximation to 1 - F
    double success_probability = 0;
};
ExpandedTransfer expanded_error(const CavityParams& p, const QubitAmplitudes& q);

/// Error floor from a photon bandwidth comparable to the Purcell-broadened
/// line: (sigma_ph / (C gamma))^2.
double bandwidth_error_bound(double sigma_ph_over_c_gamma);

/// Back-reflection error from imperfect mode matching: (1 - eta_mm)^2.
double mode_matching_error(double eta_mm);

/// Unnormalized photon-spin state after a click (photon is the high bit);
/// its squared norm times eta_d is the success probability.
Eigen::Vector4cd heralded_state(const CavityParams& p, const QubitAmplitudes& q);

}  // namespace treerep
