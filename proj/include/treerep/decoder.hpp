#pragma once

#include <cstdint>
#include <vector>

#include "treerep/tree.hpp"

namespace treerep {

/// Lost/arrived flag per photon. Photon p is tree vertex p+1 in breadth-first
/// order (the root is a spin and never travels).
struct LossPattern {
    std::vector<std::uint8_t> lost;

    static LossPattern none(const BranchingVector& t);
    /// Pattern from the low bits of `mask` (bit p = photon p lost).
    static LossPattern from_mask(const BranchingVector& t, std::uint64_t mask);
    bool is_lost(int vertex) const { return lost[static_cast<std::size_t>(vertex) - 1] != 0; }
    int lost_count() const;
};

enum class Basis : std::uint8_t { Unused, Lost, Z, X, BellPartner };

/// What the receiving station does with each photon for a given loss pattern.
struct DecodePlan {
    bool success = false;
    int bell_partner = -1;      ///< vertex, or -1 if every first-level photon was lost
    std::vector<Basis> basis;   ///< per vertex; the root is Unused
};

/// Loss decoding at a repeater station.
///
/// The heralded storage is attempted on first-level photons in order and
/// stops at the first one that arrived; that photon becomes the Bell partner
/// of the new root. Re-encoding then needs a z value for every other
/// first-level qubit and for every child of the Bell partner. A z value of a
/// vertex is available directly if it arrived, or indirectly through an
/// arrived child measured in x whose own children all have z values.
class LossDecoder {
public:
    explicit LossDecoder(const BranchingVector& t);

    const TreeLayout& layout() const { return layout_; }
    int photon_count() const { return layout_.size() - 1; }

    /// Throws std::invalid_argument if the pattern length is wrong.
    void check(const LossPattern& loss) const;

    bool success(const LossPattern& loss);
    DecodePlan plan(const LossPattern& loss);

    /// The accessors below refer to the pattern of the last success()/plan() call.
    const std::vector<std::uint8_t>& z_available() const { return z_ok_; }
    int bell_partner() const { return bell_; }
    bool arrived(int v) const { return arrived_[static_cast<std::size_t>(v)] != 0; }
    /// Arrived child `c` measured in x whose children all have z values, so
    /// that it reveals the z value of its parent.
    bool usable_path(int c) const;
    /// Vertices whose z value re-encoding needs, given the Bell partner.
    std::vector<int> required_z(int bell_partner) const;

    /// Same as success() with the loss given as a raw per-photon byte array.
    bool success_raw(const std::uint8_t* lost);

private:
    int first_arrived_first_level() const;
    void load(const std::uint8_t* lost);

    TreeLayout layout_;
    std::vector<std::uint8_t> arrived_;  // per vertex, root counts as present
    std::vector<std::uint8_t> z_ok_;
    int bell_ = -1;
};

/// Structural re-encoding success for one loss pattern.
bool decode_success(const BranchingVector& t, const LossPattern& loss);

}  // namespace treerep
