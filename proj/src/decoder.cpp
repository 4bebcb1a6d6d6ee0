#include "treerep/decoder.hpp"

#include <algorithm>
#include <stdexcept>

namespace treerep {

LossPattern LossPattern::none(const BranchingVector& t) {
    LossPattern p;
    p.lost.assign(vertex_count(t) - 1, 0);
    return p;
}

LossPattern LossPattern::from_mask(const BranchingVector& t, std::uint64_t mask) {
    LossPattern p = none(t);
    if (p.lost.size() > 64) throw std::length_error("loss mask supports at most 64 photons");
    for (std::size_t i = 0; i < p.lost.size(); ++i) p.lost[i] = static_cast<std::uint8_t>((mask >> i) & 1u);
    return p;
}

int LossPattern::lost_count() const {
    return static_cast<int>(std::count_if(lost.begin(), lost.end(), [](std::uint8_t b) { return b != 0; }));
}

LossDecoder::LossDecoder(const BranchingVector& t)
    : layout_(t), arrived_(static_cast<std::size_t>(layout_.size()), 1), z_ok_(static_cast<std::size_t>(layout_.size()), 0) {}

void LossDecoder::check(const LossPattern& loss) const {
    if (static_cast<int>(loss.lost.size()) != photon_count()) {
        throw std::invalid_argument("loss pattern has " + std::to_string(loss.lost.size()) + " entries, tree " +
                                    to_string(layout_.shape()) + " has " + std::to_string(photon_count()) +
                                    " photons");
    }
}

void LossDecoder::load(const std::uint8_t* lost) {
    const int n = layout_.size();
    arrived_[0] = 1;
    for (int v = 1; v < n; ++v) arrived_[static_cast<std::size_t>(v)] = lost[v - 1] ? 0 : 1;

    // Children come after their parent in breadth-first order.
    for (int v = n - 1; v >= 1; --v) {
        bool ok = arrived_[static_cast<std::size_t>(v)] != 0;
        const int first = layout_.first_child(v);
        const int count = layout_.child_count(v);
        for (int c = first; !ok && c < first + count; ++c) ok = usable_path(c);
        z_ok_[static_cast<std::size_t>(v)] = ok ? 1 : 0;
    }
    bell_ = first_arrived_first_level();
}

bool LossDecoder::usable_path(int c) const {
    if (!arrived_[static_cast<std::size_t>(c)]) return false;
    const int first = layout_.first_child(c);
    const int count = layout_.child_count(c);
    for (int g = first; g < first + count; ++g) {
        if (!z_ok_[static_cast<std::size_t>(g)]) return false;
    }
    return true;
}

int LossDecoder::first_arrived_first_level() const {
    for (int v = layout_.level_begin(1); v < layout_.level_begin(2); ++v) {
        if (arrived_[static_cast<std::size_t>(v)]) return v;
    }
    return -1;
}

std::vector<int> LossDecoder::required_z(int bell_partner) const {
    std::vector<int> out;
    for (int v = layout_.level_begin(1); v < layout_.level_begin(2); ++v) {
        if (v != bell_partner) out.push_back(v);
    }
    if (bell_partner >= 0) {
        for (int c = 0; c < layout_.child_count(bell_partner); ++c) out.push_back(layout_.first_child(bell_partner) + c);
    }
    return out;
}

bool LossDecoder::success_raw(const std::uint8_t* lost) {
    load(lost);
    if (bell_ < 0) return false;
    for (int v = layout_.level_begin(1); v < layout_.level_begin(2); ++v) {
        if (v != bell_ && !z_ok_[static_cast<std::size_t>(v)]) return false;
    }
    const int first = layout_.first_child(bell_);
    for (int c = first; c < first + layout_.child_count(bell_); ++c) {
        if (!z_ok_[static_cast<std::size_t>(c)]) return false;
    }
    return true;
}

bool LossDecoder::success(const LossPattern& loss) {
    check(loss);
    return success_raw(loss.lost.data());
}

DecodePlan LossDecoder::plan(const LossPattern& loss) {
    DecodePlan plan;
    plan.success = success(loss);
    plan.bell_partner = bell_;
    plan.basis.assign(static_cast<std::size_t>(layout_.size()), Basis::Unused);
    for (int v = 1; v < layout_.size(); ++v) {
        if (!arrived_[static_cast<std::size_t>(v)]) {
            plan.basis[static_cast<std::size_t>(v)] = Basis::Lost;
            continue;
        }
        if (v == bell_) {
            plan.basis[static_cast<std::size_t>(v)] = Basis::BellPartner;
            continue;
        }
        // Bases alternate down each branch: the Bell partner's children carry
        // z values, every other first-level qubit carries one itself.
        int branch_root = v;
        while (layout_.level(branch_root) > 1) branch_root = layout_.parent(branch_root);
        const int below = layout_.level(v) - 1;
        const bool z_level = branch_root == bell_ ? (below % 2 == 1) : (below % 2 == 0);
        plan.basis[static_cast<std::size_t>(v)] = z_level ? Basis::Z : Basis::X;
    }
    return plan;
}

bool decode_success(const BranchingVector& t, const LossPattern& loss) {
    LossDecoder decoder(t);
    return decoder.success(loss);
}

}  // namespace treerep
