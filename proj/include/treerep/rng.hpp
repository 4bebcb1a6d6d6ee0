#pragma once

#include <array>
#include <cstdint>

namespace treerep {

/// Philox4x32-10 (Salmon et al., SC'11): a keyed bijection on 128-bit counters.
/// Output depends only on (key, counter), so any substream can be addressed
/// directly and results do not depend on how work is split across threads.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key);
};

/// Seed for all stochastic routines. The same seed yields bit-identical
/// streams on every platform and for every worker count.
struct RngSpec {
    std::uint64_t seed = 0x5eed;
};

/// Sequential reader over Philox blocks for one substream. The 128-bit counter
/// is (block index low, block index high, stream low, stream high); the key is
/// the 64-bit seed.
class RandomStream {
public:
    RandomStream(RngSpec spec, std::uint64_t stream_id);

    std::uint32_t next_u32();
    /// Uniform on [0, 1) with 53 random bits.
    double next_double();

    std::uint64_t stream_id() const { return stream_; }

private:
    void refill();

    Philox4x32::Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buffer_{};
    int used_ = 4;
};

/// Threshold t such that `u32 < t` happens with probability p (p clamped to
/// [0, 1]; p == 1 is handled by the 64-bit width).
std::uint64_t probability_threshold(double p);

}  // namespace treerep
