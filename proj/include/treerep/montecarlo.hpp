#pragma once

#include <cstdint>

#include "treerep/decoder.hpp"
#include "treerep/rng.hpp"
#include "treerep/tree.hpp"

namespace treerep {

/// Single-qubit Pauli error; X, Y, Z each occur with probability eps/3.
enum class Pauli : std::uint8_t { I, X, Y, Z };

/// Trial budget and reproducibility settings shared by the samplers. Trial i
/// always reads Philox substream i, so estimates depend only on (seed, trials).
struct MonteCarloOptions {
    std::uint64_t trials = 100000;
    RngSpec rng;
    unsigned jobs = 1;  ///< 0 = all cores
};

struct TransmissionEstimate {
    double estimate = 0;
    double std_error = 0;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t seed = 0;
};

/// Re-encoding error estimate. Conditioned on loss decoding succeeding:
/// eps_r = errors / decoded.
struct ReencodingEstimate {
    double eps = 0;
    double eps_r = 0;
    double std_error = 0;
    std::uint64_t trials = 0;
    std::uint64_t decoded = 0;
    std::uint64_t errors = 0;
    std::uint64_t seed = 0;
};

/// Fraction of i.i.d. loss patterns (loss probability mu per photon) that the
/// loss decoder recovers from.
TransmissionEstimate sample_eta_e(const BranchingVector& t, double mu, const MonteCarloOptions& opts);

/// Whether the faults in `faults` (per vertex, root = new tree's root) corrupt
/// the re-encoded qubit for the loss state currently loaded in `decoder`.
/// Required z values are decided by majority vote over the direct outcome and
/// every usable indirect path; ties count as errors. Any fault on the Bell
/// partner or on the new root is an error.
bool reencoding_fails(const LossDecoder& decoder, const Pauli* faults);

/// Depolarizing error eps on every arrived photon and the new root.
ReencodingEstimate simulate_reencoding_error(const BranchingVector& t, double mu, double eps,
                                             const MonteCarloOptions& opts);

struct InversionResult {
    double eps = 0;
    ReencodingEstimate at_eps;
    int iterations = 0;
};

/// Single-qubit error eps whose simulated eps_r matches `target_eps_r`.
/// Bisection on common random numbers; stops once the bracket is within
/// `rel_tol` and the estimate is within 2 standard errors of the target.
/// Throws std::runtime_error after `max_iterations`.
InversionResult invert_error_map(const BranchingVector& t, double mu, double target_eps_r,
                                 const MonteCarloOptions& opts, double rel_tol = 5e-3, int max_iterations = 60);

}  // namespace treerep
