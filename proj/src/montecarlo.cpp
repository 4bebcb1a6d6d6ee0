#include "treerep/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "treerep/parallel.hpp"

namespace treerep {

namespace {

constexpr std::uint64_t kShardTrials = 1u << 15;

std::size_t shard_count(std::uint64_t trials) { return static_cast<std::size_t>((trials + kShardTrials - 1) / kShardTrials); }

void check_probability(double p, const char* name) {
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

void draw_loss(RandomStream& rng, std::uint64_t threshold, std::vector<std::uint8_t>& lost) {
    for (auto& l : lost) l = rng.next_u32() < threshold ? 1 : 0;
}

double bernoulli_stderr(std::uint64_t hits, std::uint64_t n) {
    if (n == 0) return 0;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return std::sqrt(p * (1 - p) / static_cast<double>(n));
}

// Faults are placed by geometric skipping over qubit slots 0..photons, where
// slot p < photons is vertex p+1 and the last slot is the new root (vertex 0).
class FaultSampler {
public:
    FaultSampler(int photons, double eps) : photons_(photons), eps_(eps), log_keep_(std::log1p(-eps)) {}

    template <typename Visit>
    void draw(RandomStream& rng, Visit&& visit) const {
        if (eps_ <= 0) return;
        for (long long slot = -1;;) {
            if (eps_ >= 1) {
                ++slot;
            } else {
                const double u = 1.0 - rng.next_double();  // (0, 1]
                const double skip = std::floor(std::log(u) / log_keep_);
                if (skip > photons_) return;
                slot += 1 + static_cast<long long>(skip);
            }
            if (slot > photons_) return;
            const auto kind = static_cast<std::uint8_t>((static_cast<std::uint64_t>(rng.next_u32()) * 3) >> 32);
            const int vertex = slot == photons_ ? 0 : static_cast<int>(slot) + 1;
            visit(vertex, static_cast<Pauli>(kind + 1));
        }
    }

private:
    int photons_;
    double eps_;
    double log_keep_;
};

bool flips_z(Pauli p) { return p == Pauli::X || p == Pauli::Y; }
bool flips_x(Pauli p) { return p == Pauli::Z || p == Pauli::Y; }

bool z_correct(const LossDecoder& d, const Pauli* faults, int v) {
    const TreeLayout& layout = d.layout();
    int right = 0;
    int wrong = 0;
    if (d.arrived(v)) (flips_z(faults[v]) ? wrong : right)++;
    const int first = layout.first_child(v);
    for (int c = first; c < first + layout.child_count(v); ++c) {
        if (!d.usable_path(c)) continue;
        bool flipped = flips_x(faults[c]);
        const int gfirst = layout.first_child(c);
        for (int g = gfirst; g < gfirst + layout.child_count(c); ++g) flipped ^= !z_correct(d, faults, g);
        (flipped ? wrong : right)++;
    }
    return right > wrong;
}

}  // namespace

bool reencoding_fails(const LossDecoder& decoder, const Pauli* faults) {
    const int j = decoder.bell_partner();
    if (j < 0) throw std::logic_error("no Bell partner in the loaded loss pattern");
    if (faults[0] != Pauli::I || faults[j] != Pauli::I) return true;
    for (int v : decoder.required_z(j)) {
        if (!z_correct(decoder, faults, v)) return true;
    }
    return false;
}

TransmissionEstimate sample_eta_e(const BranchingVector& t, double mu, const MonteCarloOptions& opts) {
    check_probability(mu, "loss probability");
    if (opts.trials == 0) throw std::invalid_argument("trials must be at least 1");
    const std::uint64_t threshold = probability_threshold(mu);
    const std::size_t shards = shard_count(opts.trials);
    std::vector<std::uint64_t> hits(shards, 0);

    for_each_shard(shards, opts.jobs, [&](std::size_t s) {
        LossDecoder decoder(t);
        std::vector<std::uint8_t> lost(static_cast<std::size_t>(decoder.photon_count()));
        const std::uint64_t begin = s * kShardTrials;
        const std::uint64_t end = std::min(opts.trials, begin + kShardTrials);
        std::uint64_t count = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
            RandomStream rng(opts.rng, i);
            draw_loss(rng, threshold, lost);
            count += decoder.success_raw(lost.data()) ? 1 : 0;
        }
        hits[s] = count;
    });

    TransmissionEstimate out;
    out.trials = opts.trials;
    out.seed = opts.rng.seed;
    for (auto h : hits) out.successes += h;
    out.estimate = static_cast<double>(out.successes) / static_cast<double>(out.trials);
    out.std_error = bernoulli_stderr(out.successes, out.trials);
    return out;
}

ReencodingEstimate simulate_reencoding_error(const BranchingVector& t, double mu, double eps,
                                             const MonteCarloOptions& opts) {
    check_probability(mu, "loss probability");
    check_probability(eps, "single-qubit error");
    if (opts.trials == 0) throw std::invalid_argument("trials must be at least 1");
    const std::uint64_t threshold = probability_threshold(mu);
    const std::size_t shards = shard_count(opts.trials);
    std::vector<std::uint64_t> decoded(shards, 0);
    std::vector<std::uint64_t> errors(shards, 0);

    for_each_shard(shards, opts.jobs, [&](std::size_t s) {
        LossDecoder decoder(t);
        const int photons = decoder.photon_count();
        const FaultSampler sampler(photons, eps);
        std::vector<std::uint8_t> lost(static_cast<std::size_t>(photons));
        std::vector<Pauli> faults(static_cast<std::size_t>(photons) + 1, Pauli::I);
        std::vector<int> touched;
        const std::uint64_t begin = s * kShardTrials;
        const std::uint64_t end = std::min(opts.trials, begin + kShardTrials);
        std::uint64_t ok = 0;
        std::uint64_t bad = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
            RandomStream rng(opts.rng, i);
            draw_loss(rng, threshold, lost);
            if (!decoder.success_raw(lost.data())) continue;
            ++ok;
            touched.clear();
            sampler.draw(rng, [&](int v, Pauli p) {
                faults[static_cast<std::size_t>(v)] = p;
                touched.push_back(v);
            });
            if (touched.empty()) continue;
            if (reencoding_fails(decoder, faults.data())) ++bad;
            for (int v : touched) faults[static_cast<std::size_t>(v)] = Pauli::I;
        }
        decoded[s] = ok;
        errors[s] = bad;
    });

    ReencodingEstimate out;
    out.eps = eps;
    out.trials = opts.trials;
    out.seed = opts.rng.seed;
    for (std::size_t s = 0; s < shards; ++s) {
        out.decoded += decoded[s];
        out.errors += errors[s];
    }
    if (out.decoded > 0) out.eps_r = static_cast<double>(out.errors) / static_cast<double>(out.decoded);
    out.std_error = bernoulli_stderr(out.errors, out.decoded);
    return out;
}

InversionResult invert_error_map(const BranchingVector& t, double mu, double target_eps_r,
                                 const MonteCarloOptions& opts, double rel_tol, int max_iterations) {
    if (!(target_eps_r >= 0 && target_eps_r < 1)) throw std::invalid_argument("target eps_r must lie in [0, 1)");
    InversionResult out;
    if (target_eps_r == 0) {
        out.at_eps = simulate_reencoding_error(t, mu, 0.0, opts);
        return out;
    }

    double lo = 0;
    double hi = target_eps_r;
    ReencodingEstimate at_hi = simulate_reencoding_error(t, mu, hi, opts);
    while (at_hi.eps_r < target_eps_r) {
        if (hi >= 1) throw std::runtime_error("target eps_r not reached even at eps = 1");
        lo = hi;
        hi = std::min(1.0, 2 * hi);
        at_hi = simulate_reencoding_error(t, mu, hi, opts);
        if (++out.iterations > max_iterations) throw std::runtime_error("error map inversion did not bracket the target");
    }

    while (out.iterations++ < max_iterations) {
        const double mid = 0.5 * (lo + hi);
        const ReencodingEstimate est = simulate_reencoding_error(t, mu, mid, opts);
        (est.eps_r < target_eps_r ? lo : hi) = mid;
        if (hi - lo <= rel_tol * hi && std::abs(est.eps_r - target_eps_r) <= 2 * est.std_error) {
            out.eps = mid;
            out.at_eps = est;
            return out;
        }
    }
    throw std::runtime_error("error map inversion did not converge within " + std::to_string(max_iterations) +
                             " iterations");
}

}  // namespace treerep
