#pragma once

#include <vector>

#include "treerep/analytic.hpp"
#include "treerep/tree.hpp"

namespace treerep {

struct OptimizationResult {
    BranchingVector tree;
    long long stations = 0;  ///< m, intermediate repeater stations
    double distance_km = 0;
    double spacing_km = 0;
    RateResult rate;
    double cost = 0;
    bool feasible = false;
    std::uint64_t trees_searched = 0;
    long long max_stations = 0;  ///< upper end of the m grid
};

/// Minimum-cost (tree, m) over every tree with at most max_photons vertices
/// and max_depth levels, and every m in [1, floor(L / min_spacing) - 1].
/// Ties go to smaller n, then smaller m, then the lexicographically smaller
/// tree. If no point yields a key the result is flagged infeasible.
OptimizationResult optimize(const RepeaterParams& params, double distance_km, unsigned jobs = 1);

/// optimize() for each distance in order.
std::vector<OptimizationResult> sweep(const RepeaterParams& params, const std::vector<double>& distances_km,
                                      unsigned jobs = 1);

/// Repeater transmission against sending the tree's n photons straight down
/// the fiber.
struct CrossoverResult {
    BranchingVector tree;
    long long stations = 0;
    double spacing_km = 0;
    double eta_e = 0;
    double eta_rep = 0;  ///< eta_e^{m+1}
    double eta_dir = 0;  ///< 1 - (1 - eta_d e^{-L/L_att})^n
    double ratio = 0;
    double eps_trans_linear = 0;  ///< (m+1) eps_r
    bool degenerate = false;      ///< eta_dir == 0, ratio undefined
    bool feasible = false;        ///< some m satisfies the error cap
};

/// Maximizes eta_rep / eta_dir over trees and m >= 1 subject to
/// (m+1) eps_r <= error_cap. Ties go to smaller n, then m, then tree.
CrossoverResult crossover_vs_direct(const RepeaterParams& params, double distance_km, double error_cap = 0.1,
                                    unsigned jobs = 1);

/// Best tree for a fixed station count, same objective.
CrossoverResult crossover_at_stations(const RepeaterParams& params, double distance_km, long long stations,
                                      unsigned jobs = 1);

}  // namespace treerep
