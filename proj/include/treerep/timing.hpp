#pragma once

#include "treerep/tree.hpp"

namespace treerep {

/// Time budget for emitting a tree. All times in seconds.
struct TimingParams {
    double tau_ph = 1e-9;   ///< time-bin photon generation time
    double tau_cz = 10e-9;  ///< spin-spin CZ gate time
    /// Slow-down of first-level photons (narrowband emission for the
    /// re-encoding gate), in units of tau_ph.
    double first_level_factor = 100.0;
    double light_speed_fiber = 2e8;  ///< m/s, for delay-line lengths

    /// Throws std::invalid_argument unless all fields are non-negative and
    /// the speed of light is positive.
    void validate() const;
};

/// Photons in one branch below its first-level photon: b1(1 + b2(1 + ... (1 + bd))).
/// Zero for a depth-1 tree.
long long photons_below_first_level(const BranchingVector& t);

/// 1/r0: b0[f + b1(1 + ... b_{d-1}(1 + b_d))] tau_ph + b0[3 + b1(1 + ... (1 + b_{d-1}))] tau_cz,
/// where the CZ nesting stops one level above the leaves.
double generation_time(const BranchingVector& t, const TimingParams& p);

/// Local repetition rate r0 = 1 / generation_time.
double repetition_rate(const BranchingVector& t, const TimingParams& p);

/// Time to emit one branch. For depth-3 trees this is
/// (f + (1 + b2) b1) tau_ph + (b1 + 3) tau_cz; other depths use the per-branch
/// share of generation_time.
double branch_time(const BranchingVector& t, const TimingParams& p);

/// Fiber delay (meters) that lets the first-level photon of a branch overtake
/// the rest of it: branch_time * c.
double delay_line_length(const BranchingVector& t, const TimingParams& p);

}  // namespace treerep
