#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "treerep/decoder.hpp"
#include "treerep/rng.hpp"
#include "treerep/tree.hpp"

namespace treerep {

/// Hard cap on state-vector size.
inline constexpr int kMaxOracleQubits = 14;

/// State vector over `qubits` qubits; qubit q is bit q of the amplitude index.
class PureState {
public:
    PureState() = default;
    explicit PureState(int qubits);
    PureState(int qubits, Eigen::VectorXcd amplitudes);

    int qubits() const { return qubits_; }
    const Eigen::VectorXcd& amplitudes() const { return amp_; }
    Eigen::VectorXcd& amplitudes() { return amp_; }
    double norm() const { return amp_.norm(); }
    void normalize();

    void apply_h(int q);
    void apply_x(int q);
    void apply_z(int q);
    /// Probability of outcome bit 0 in the computational basis.
    double prob_zero(int q) const;
    /// Projects qubit q onto |bit> and renormalizes. Returns the branch probability.
    double project(int q, int bit);
    /// <P> for a Pauli string given as x/z masks over qubits (Y where both set).
    std::complex<double> expectation(std::uint64_t x_mask, std::uint64_t z_mask) const;

private:
    void check_qubit(int q) const;

    int qubits_ = 0;
    Eigen::VectorXcd amp_;
};

/// Tree-cluster state with vertex v (breadth-first order, root = 0) on qubit v:
/// amplitude 2^{-n/2} (-1)^{sum over edges x_u x_v}.
PureState build_tree_state(const BranchingVector& t);

/// The [2,2] tree written as a superposition over the root:
///   (|0> (x)_a (|0++> + |1-->)/sqrt2 + |1> (x)_a (|0++> - |1-->)/sqrt2) / sqrt2,
/// one factor per first-level branch a. Built directly from these kets as a
/// cross-check on build_tree_state.
PureState branch_product_22();

/// Bell-measurement outcome on (message, root): x1 = +1 selects
/// (|00> + x2|11>)/sqrt2, x1 = -1 selects (|01> + x2|10>)/sqrt2, kets written
/// |message, root>.
struct BellOutcome {
    int x1 = +1;
    int x2 = +1;
    void validate() const;
};

/// Teleports alpha|0> + beta|1> into the tree. The message joins as qubit 0
/// and the root moves to qubit 1, then both are projected onto `outcome`.
/// The returned state holds the photons only: qubit k is vertex k+1.
PureState encode_message(const PureState& tree, std::complex<double> alpha, std::complex<double> beta,
                         BellOutcome outcome);

/// Chooses measurement outcomes during decoding.
class OutcomeSource {
public:
    /// Born-rule sampling from stream `stream_id` of `spec`.
    OutcomeSource(RngSpec spec, std::uint64_t stream_id);
    /// Fixed outcome bit per vertex; a forced outcome of probability zero
    /// marks the run as impossible.
    explicit OutcomeSource(std::vector<int> forced_bits);

    int choose(int vertex, double prob_zero);
    bool impossible() const { return impossible_; }

private:
    std::vector<int> forced_;
    RandomStream rng_{RngSpec{}, 0};
    bool sampling_ = false;
    bool impossible_ = false;
};

/// Everything observed at the receiving station, plus the frame bits needed
/// to undo the encoding.
struct MeasurementRecord {
    std::vector<Basis> basis;       ///< per vertex
    std::vector<int> outcome;       ///< per vertex, +1/-1, 0 when not observed
    std::vector<int> z_value;       ///< per vertex, inferred z outcome +1/-1, 0 if unknown
    BellOutcome encoding;
    int other_first_level_sign = 1; ///< product of z values of first-level qubits other than the Bell partner
    int child_sign = 1;             ///< product of z values of the Bell partner's children
};

struct DecodeResult {
    bool possible = true;  ///< false if a forced outcome had zero probability
    bool success = false;
    int bell_partner = -1;
    Eigen::Vector2cd qubit = Eigen::Vector2cd::Zero();  ///< corrected message, valid on success
    MeasurementRecord record;
};

/// Receives the encoded photons with losses: lost photons are measured with a
/// hidden outcome (same as tracing them out), arrived photons other than the
/// Bell partner are measured in alternating z/x bases, required z values are
/// inferred from the observed outcomes, and the Pauli frame is undone on the
/// Bell partner.
DecodeResult decode_with_loss(const BranchingVector& t, const PureState& encoded, BellOutcome encoding,
                              const LossPattern& loss, OutcomeSource& outcomes);

/// Message fidelity |<msg|result>|^2.
double message_fidelity(const DecodeResult& r, std::complex<double> alpha, std::complex<double> beta);

/// Decides recovery from the quantum state alone. A reference qubit is
/// entangled with the message before encoding; after the station's
/// measurements (lost photons left unmeasured) the Bell partner must hold the
/// reference's partner: rho(reference, partner) pure with a maximally mixed
/// reference.
bool quantum_recoverable(const BranchingVector& t, const LossPattern& loss);

/// Inference of required z values from the loss pattern alone, written
/// top-down and independent of LossDecoder.
bool structural_success(const BranchingVector& t, const LossPattern& loss);

/// success_counts[k] = number of recoverable patterns with exactly k lost photons.
struct LossEnumeration {
    int photons = 0;
    std::vector<std::uint64_t> success_counts;
    /// sum_k success_counts[k] mu^k (1-mu)^(photons-k)
    long double probability(long double mu) const;
};

/// Exhaustive enumeration of all 2^photons loss patterns (at most 10 photons
/// by default).
LossEnumeration enumerate_loss_patterns(const BranchingVector& t, std::uint64_t max_vertices = 11);

/// Success probability over all loss patterns with per-photon loss mu.
double enumerate_loss_success(const BranchingVector& t, double mu);

}  // namespace treerep
