#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "treerep/rng.hpp"
#include "treerep/twoway.hpp"

using namespace treerep;

TEST(ZFactor, SmallCases) {
    EXPECT_NEAR(z_factor(1, 0.5), 8.0 / 3.0, 1e-12);
    EXPECT_NEAR(static_cast<double>(z_factor_alternating(1, 0.5L)), 8.0 / 3.0, 1e-15);
}

TEST(ZFactor, ExactlyOneAtUnitProbability) {
    for (int l = 1; l <= 64; ++l) {
        EXPECT_EQ(z_factor(l, 1.0), 1.0) << l;
        EXPECT_EQ(z_factor_alternating(l, 1.0L), 1.0L) << l;
    }
}

TEST(ZFactor, FormsAgree) {
    for (int l : {1, 3, 7, 15, 31}) {
        for (double p : {0.05, 0.3, 0.7, 0.95}) {
            const double a = z_factor(l, p);
            const double b = static_cast<double>(z_factor_alternating(l, static_cast<long double>(p)));
            EXPECT_NEAR(a / b, 1.0, 1e-9) << l << " " << p;
            EXPECT_GE(a, 1.0);
        }
    }
}

TEST(ZFactor, AsymptoticBranchIsContinuous) {
    // l and p chosen so that the series would be too long.
    const double p = 1e-5;
    const double z = z_factor(1000, p);
    double h = 0;
    for (int k = 1; k <= 1001; ++k) h += 1.0 / k;
    EXPECT_NEAR(z, h / -std::log1p(-p) + 0.5, 1e-6 * z);
}

TEST(ZFactor, MatchesSampledMaximum) {
    for (auto [l, p] : {std::pair{3, 0.3}, std::pair{9, 0.6}}) {
        RandomStream rng(RngSpec{3}, static_cast<std::uint64_t>(l));
        const int trials = 100000;
        double sum = 0, sum2 = 0;
        for (int i = 0; i < trials; ++i) {
            int worst = 0;
            for (int link = 0; link <= l; ++link) {
                int tries = 1;
                while (rng.next_double() >= p) ++tries;
                worst = std::max(worst, tries);
            }
            sum += worst;
            sum2 += static_cast<double>(worst) * worst;
        }
        const double mean = sum / trials;
        const double se = std::sqrt((sum2 / trials - mean * mean) / trials);
        EXPECT_NEAR(z_factor(l, p), mean, 3 * se) << l << " " << p;
    }
}

TEST(ZFactor, RejectsBadInput) {
    EXPECT_THROW(z_factor(0, 0.5), std::invalid_argument);
    EXPECT_THROW(z_factor(1, 0.0), std::invalid_argument);
    EXPECT_THROW(z_factor(1, 1.5), std::invalid_argument);
}

TEST(LinkSuccess, Behaviour) {
    TwoWayParams p;
    p.detector_efficiency = 0.0;
    EXPECT_EQ(link_success(p, 1), 0.0);
    p = TwoWayParams{};
    const double small = link_success(p, 24);
    p.total_qubits *= 2;
    EXPECT_GT(link_success(p, 24), small);
    // Direct formula: 1 - (1 - eta_d^2 e^{-L/((l+1) L_att)} / 2)^ceil(Q / (2(l+1))).
    const TwoWayParams q{1155, 0.95, 1000.0, 20.0, 2e8, 1.0};
    const double single = 0.95 * 0.95 * std::exp(-1000.0 / 25 / 20) / 2;
    EXPECT_NEAR(link_success(q, 24), 1 - std::pow(1 - single, 24), 1e-14);
}

TEST(TwoWayRate, OptimizesOverOddLinks) {
    const TwoWayParams p = TwoWayParams::from_tree_stations(517);
    EXPECT_EQ(p.total_qubits, 1554u);
    const TwoWayResult r = twoway_rate(p);
    EXPECT_EQ(r.l % 2, 1);
    EXPECT_EQ(r.l_max, 999);
    EXPECT_NEAR(r.rate_hz, (r.l + 1) * 2e8 / 1e6 / r.z, 1e-9 * r.rate_hz);
    for (int l = 1; l <= r.l_max; l += 2) {
        const double rate = (l + 1) * 2e8 / 1e6 / z_factor(l, link_success(p, l));
        ASSERT_LE(rate, r.rate_hz * (1 + 1e-12)) << l;
    }
    EXPECT_EQ(twoway_rate(p).rate_hz, r.rate_hz);
}

TEST(TwoWayRate, LightLimitedWhenLinksAlwaysWork) {
    TwoWayParams p;
    p.distance_km = 10.0;
    p.attenuation_length_km = 1e9;
    p.detector_efficiency = 1.0;
    p.total_qubits = 1000000;
    const TwoWayResult r = twoway_rate(p);
    EXPECT_NEAR(r.z, 1.0, 1e-12);
    EXPECT_NEAR(r.rate_hz, (r.l + 1) * 2e8 / 1e4, 1e-6);
}

TEST(TwoWayRate, DecreasesWithDistance) {
    TwoWayParams p;
    double prev = twoway_rate(p).rate_hz;
    for (double L : {1500.0, 2000.0}) {
        p.distance_km = L;
        const double r = twoway_rate(p).rate_hz;
        EXPECT_LT(r, prev);
        prev = r;
    }
}
