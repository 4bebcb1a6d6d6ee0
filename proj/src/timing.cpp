#include "treerep/timing.hpp"

#include <stdexcept>

namespace treerep {

void TimingParams::validate() const {
    if (!(tau_ph >= 0) || !(tau_cz >= 0) || !(first_level_factor >= 0)) {
        throw std::invalid_argument("timing parameters must be non-negative");
    }
    if (!(light_speed_fiber > 0)) throw std::invalid_argument("speed of light in fiber must be positive");
}

namespace {

// b1(1 + b2(1 + ... b_{last-1}(1 + b_last))) over entries 1..last.
long long nested_count(const std::vector<int>& b, std::size_t last) {
    if (last < 1 || last >= b.size()) return 0;
    long long x = b[last];
    for (std::size_t i = last - 1; i >= 1; --i) x = b[i] * (1 + x);
    return x;
}

}  // namespace

long long photons_below_first_level(const BranchingVector& t) {
    return nested_count(t.branches(), t.branches().size() - 1);
}

double generation_time(const BranchingVector& t, const TimingParams& p) {
    p.validate();
    const auto& b = t.branches();
    const std::size_t d = b.size() - 1;
    const long long ph_nest = nested_count(b, d);
    const long long cz_nest = d >= 1 ? nested_count(b, d - 1) : 0;
    return b[0] * (p.first_level_factor + static_cast<double>(ph_nest)) * p.tau_ph +
           static_cast<double>(b[0] * (3 + cz_nest)) * p.tau_cz;
}

double repetition_rate(const BranchingVector& t, const TimingParams& p) {
    return 1.0 / generation_time(t, p);
}

double branch_time(const BranchingVector& t, const TimingParams& p) {
    p.validate();
    if (t.depth() == 3) {
        const double b1 = t[1];
        const double b2 = t[2];
        return (p.first_level_factor + (1 + b2) * b1) * p.tau_ph + (b1 + 3) * p.tau_cz;
    }
    const auto& b = t.branches();
    const std::size_t d = b.size() - 1;
    const long long cz_nest = d >= 1 ? nested_count(b, d - 1) : 0;
    return (p.first_level_factor + static_cast<double>(nested_count(b, d))) * p.tau_ph +
           static_cast<double>(3 + cz_nest) * p.tau_cz;
}

double delay_line_length(const BranchingVector& t, const TimingParams& p) {
    return branch_time(t, p) * p.light_speed_fiber;
}

}  // namespace treerep
