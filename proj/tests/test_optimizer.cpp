#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <tuple>

#include "treerep/optimizer.hpp"

using namespace treerep;

namespace {

RepeaterParams small_space() {
    RepeaterParams p;
    p.max_photons = 40;
    p.max_depth = 3;
    p.eps_r = 1e-3;
    return p;
}

}  // namespace

TEST(Optimizer, MatchesBruteForceOnSmallSpace) {
    const RepeaterParams p = small_space();
    const double L = 60.0;
    const OptimizationResult best = optimize(p, L);
    ASSERT_TRUE(best.feasible);

    double cost = std::numeric_limits<double>::infinity();
    BranchingVector arg;
    long long arg_m = -1;
    for (const auto& t : enumerate_trees(p.max_photons, p.max_depth)) {
        for (long long m = 1; m <= 59; ++m) {
            const double c = cost_parameter(p, t, m, L).cost;
            const bool better = c < cost || (arg_m >= 0 && c == cost && std::tuple(vertex_count(t), m, t) <
                                                              std::tuple(vertex_count(arg), arg_m, arg));
            if (better) {
                cost = c;
                arg = t;
                arg_m = m;
            }
        }
    }
    EXPECT_EQ(best.tree, arg);
    EXPECT_EQ(best.stations, arg_m);
    EXPECT_EQ(best.cost, cost);
    EXPECT_EQ(best.max_stations, 59);
    EXPECT_EQ(best.trees_searched, enumerate_trees(p.max_photons, p.max_depth).size());
}

TEST(Optimizer, SameAnswerForAnyWorkerCount) {
    const RepeaterParams p = small_space();
    const OptimizationResult a = optimize(p, 80.0, 1);
    const OptimizationResult b = optimize(p, 80.0, 3);
    EXPECT_EQ(a.tree, b.tree);
    EXPECT_EQ(a.stations, b.stations);
    EXPECT_EQ(a.cost, b.cost);
}

TEST(Optimizer, InfeasibleWhenErrorsTooLarge) {
    RepeaterParams p = small_space();
    p.eps_r = 0.3;
    const OptimizationResult r = optimize(p, 100.0);
    EXPECT_FALSE(r.feasible);
    EXPECT_TRUE(std::isinf(r.cost));
}

TEST(Optimizer, ShortDistances) {
    // No room for a station at the minimum spacing.
    EXPECT_FALSE(optimize(small_space(), 1.5).feasible);
    EXPECT_THROW(optimize(small_space(), 0.5), std::invalid_argument);
}

TEST(Optimizer, HeadlineOptimum) {
    // Default settings at 1000 km.
    const OptimizationResult r = optimize(RepeaterParams{}, 1000.0);
    EXPECT_EQ(r.tree, BranchingVector({4, 14, 4}));
    EXPECT_EQ(r.stations, 402);
    EXPECT_NEAR(r.rate.secret_rate, 82.0e3, 1e3);
}

TEST(Optimizer, SweepKeepsOrder) {
    const auto rs = sweep(small_space(), {40.0, 80.0});
    ASSERT_EQ(rs.size(), 2u);
    EXPECT_EQ(rs[0].distance_km, 40.0);
    EXPECT_EQ(rs[1].distance_km, 80.0);
    EXPECT_LT(rs[0].cost, rs[1].cost);
}

TEST(Crossover, RespectsErrorCap) {
    RepeaterParams p = small_space();
    p.detector_efficiency = 0.85;
    const CrossoverResult r = crossover_vs_direct(p, 100.0, 0.1);
    ASSERT_TRUE(r.feasible);
    EXPECT_LE(r.eps_trans_linear, 0.1 + 1e-12);
    EXPECT_LE(r.stations, 99);
    EXPECT_NEAR(r.eta_rep, std::pow(r.eta_e, static_cast<double>(r.stations + 1)), 1e-12);
    EXPECT_NEAR(r.ratio, r.eta_rep / r.eta_dir, 1e-9 * r.ratio);
}

TEST(Crossover, BestOverStationsDominatesFixedStations) {
    RepeaterParams p = small_space();
    const CrossoverResult best = crossover_vs_direct(p, 100.0, 0.1);
    for (long long m : {10LL, 40LL, 99LL}) {
        const CrossoverResult at = crossover_at_stations(p, 100.0, m);
        EXPECT_EQ(at.stations, m);
        EXPECT_LE(at.ratio, best.ratio * (1 + 1e-12));
    }
    EXPECT_THROW(crossover_at_stations(p, 100.0, 0), std::invalid_argument);
}
