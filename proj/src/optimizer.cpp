#include "treerep/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "treerep/parallel.hpp"

namespace treerep {

namespace {

constexpr std::size_t kTreesPerShard = 256;

struct Candidate {
    double score = std::numeric_limits<double>::infinity();  // lower is better
    std::uint64_t n = 0;
    long long m = 0;
    std::size_t tree = 0;  // index into the enumeration
    bool valid = false;
};

// Enumeration order is by depth first, so tree indices are not lexicographic.
bool better(const Candidate& a, const Candidate& b, const std::vector<BranchingVector>& trees) {
    if (!b.valid) return a.valid;
    if (!a.valid) return false;
    if (a.score != b.score) return a.score < b.score;
    if (a.n != b.n) return a.n < b.n;
    if (a.m != b.m) return a.m < b.m;
    return trees[a.tree] < trees[b.tree];
}

template <typename Score>
Candidate search(const std::vector<BranchingVector>& trees, long long m_begin, long long m_end, unsigned jobs,
                 Score&& score) {
    const std::size_t shards = (trees.size() + kTreesPerShard - 1) / kTreesPerShard;
    std::vector<Candidate> local(shards);
    for_each_shard(shards, jobs, [&](std::size_t s) {
        Candidate best;
        const std::size_t end = std::min(trees.size(), (s + 1) * kTreesPerShard);
        for (std::size_t i = s * kTreesPerShard; i < end; ++i) {
            const std::uint64_t n = vertex_count(trees[i]);
            for (long long m = m_begin; m <= m_end; ++m) {
                Candidate c{score(i, m), n, m, i, true};
                if (std::isnan(c.score)) continue;
                if (better(c, best, trees)) best = c;
            }
        }
        local[s] = best;
    });
    Candidate best;
    for (const auto& c : local) {
        if (better(c, best, trees)) best = c;
    }
    return best;
}

long long max_stations_for(const RepeaterParams& params, double distance_km) {
    if (!(distance_km >= params.min_spacing_km)) {
        throw std::invalid_argument("distance must be at least the minimum station spacing");
    }
    return static_cast<long long>(std::floor(distance_km / params.min_spacing_km)) - 1;
}

std::vector<double> hop_loss(const RepeaterParams& params, double distance_km, long long m_end) {
    std::vector<double> mu(static_cast<std::size_t>(std::max(m_end, 0LL)) + 1, 0.0);
    for (long long m = 0; m <= m_end; ++m) {
        mu[static_cast<std::size_t>(m)] =
            LossModel::from_channel(distance_km / static_cast<double>(m + 1), params.attenuation_length_km,
                                    params.detector_efficiency)
                .mu;
    }
    return mu;
}

}  // namespace

OptimizationResult optimize(const RepeaterParams& params, double distance_km, unsigned jobs) {
    params.validate();
    const long long m_end = max_stations_for(params, distance_km);
    const auto trees = enumerate_trees(params.max_photons, params.max_depth);
    const auto mu = hop_loss(params, distance_km, m_end);

    std::vector<double> fraction(mu.size(), 0.0);
    for (long long m = 0; m <= m_end; ++m) {
        fraction[static_cast<std::size_t>(m)] =
            secret_fraction(qber_from_eps(accumulated_error(params.eps_r, m)));
    }
    std::vector<double> r0(trees.size());
    for (std::size_t i = 0; i < trees.size(); ++i) r0[i] = repetition_rate(trees[i], params.timing);

    // Same arithmetic as cost_parameter so the winner's cost is reproduced exactly.
    const double inf = std::numeric_limits<double>::infinity();
    const Candidate best = search(trees, 1, m_end, jobs, [&](std::size_t i, long long m) {
        const auto sm = static_cast<std::size_t>(m);
        const double f = fraction[sm];
        if (!(f > 0)) return inf;
        const double p_trans = chain_transmission(encoded_transmission(trees[i], mu[sm]), m);
        if (!(p_trans > 0)) return inf;
        const double secret_rate = r0[i] * f * p_trans;
        const double cost = (1.0 / secret_rate) * (static_cast<double>(m) * params.attenuation_length_km) /
                            (params.timing.tau_ph * distance_km);
        return std::isfinite(cost) ? cost : inf;
    });

    OptimizationResult out;
    out.distance_km = distance_km;
    out.trees_searched = trees.size();
    out.max_stations = m_end;
    if (best.valid) {
        out.tree = trees[best.tree];
        out.stations = best.m;
    } else {
        out.tree = BranchingVector{1};
        out.stations = 0;
    }
    out.rate = cost_parameter(params, out.tree, out.stations, distance_km);
    out.spacing_km = out.rate.spacing_km;
    out.feasible = best.valid && std::isfinite(best.score) && out.rate.feasible;
    out.cost = out.feasible ? out.rate.cost : inf;
    return out;
}

std::vector<OptimizationResult> sweep(const RepeaterParams& params, const std::vector<double>& distances_km,
                                      unsigned jobs) {
    if (distances_km.empty()) throw std::invalid_argument("sweep needs at least one distance");
    std::vector<OptimizationResult> out;
    out.reserve(distances_km.size());
    for (double L : distances_km) out.push_back(optimize(params, L, jobs));
    return out;
}

namespace {

CrossoverResult crossover_search(const RepeaterParams& params, double distance_km, long long m_begin,
                                 long long m_end, unsigned jobs) {
    params.validate();
    const auto trees = enumerate_trees(params.max_photons, params.max_depth);
    const auto mu = hop_loss(params, distance_km, m_end);
    std::vector<double> eta_dir(trees.size());
    for (std::size_t i = 0; i < trees.size(); ++i) {
        eta_dir[i] = direct_transmission(static_cast<long long>(vertex_count(trees[i])), params.detector_efficiency,
                                         distance_km, params.attenuation_length_km);
    }

    CrossoverResult out;
    out.tree = BranchingVector{1};
    const bool degenerate = eta_dir.empty() || eta_dir.front() == 0.0;
    // With eta_d = 0 every eta_dir vanishes; rank by eta_rep instead and flag it.
    const Candidate best = search(trees, m_begin, m_end, jobs, [&](std::size_t i, long long m) {
        const double rep = chain_transmission(encoded_transmission(trees[i], mu[static_cast<std::size_t>(m)]), m);
        return degenerate ? -rep : -(rep / eta_dir[i]);
    });
    if (!best.valid) return out;

    out.feasible = true;
    out.degenerate = degenerate;
    out.tree = trees[best.tree];
    out.stations = best.m;
    out.spacing_km = distance_km / static_cast<double>(best.m + 1);
    out.eta_e = encoded_transmission(out.tree, mu[static_cast<std::size_t>(best.m)]);
    out.eta_rep = chain_transmission(out.eta_e, best.m);
    out.eta_dir = eta_dir[best.tree];
    out.ratio = degenerate ? 0.0 : out.eta_rep / out.eta_dir;
    out.eps_trans_linear = accumulated_error_linear(params.eps_r, best.m);
    return out;
}

}  // namespace

CrossoverResult crossover_vs_direct(const RepeaterParams& params, double distance_km, double error_cap,
                                    unsigned jobs) {
    if (!(error_cap > 0)) throw std::invalid_argument("error cap must be positive");
    long long m_end = max_stations_for(params, distance_km);
    if (params.eps_r > 0) {
        m_end = std::min(m_end, static_cast<long long>(std::floor(error_cap / params.eps_r + 1e-9)) - 1);
    }
    if (m_end < 1) {
        CrossoverResult none;
        none.tree = BranchingVector{1};
        return none;
    }
    return crossover_search(params, distance_km, 1, m_end, jobs);
}

CrossoverResult crossover_at_stations(const RepeaterParams& params, double distance_km, long long stations,
                                      unsigned jobs) {
    if (stations < 1 || stations > max_stations_for(params, distance_km)) {
        throw std::invalid_argument("station count outside the allowed grid");
    }
    return crossover_search(params, distance_km, stations, stations, jobs);
}

}  // namespace treerep
