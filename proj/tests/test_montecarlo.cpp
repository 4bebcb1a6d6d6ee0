#include <gtest/gtest.h>

#include <cmath>

#include "treerep/analytic.hpp"
#include "treerep/montecarlo.hpp"
#include "treerep/oracle.hpp"
#include "treerep/rng.hpp"

using namespace treerep;

TEST(Philox, KnownAnswers) {
    using C = Philox4x32::Counter;
    EXPECT_EQ(Philox4x32::generate({0, 0, 0, 0}, {0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomStream, StreamsAreAddressable) {
    RandomStream a(RngSpec{7}, 3), b(RngSpec{7}, 3), c(RngSpec{7}, 4);
    for (int i = 0; i < 10; ++i) {
        const auto x = a.next_u32();
        EXPECT_EQ(x, b.next_u32());
        (void)c.next_u32();
    }
    RandomStream d(RngSpec{7}, 3), e(RngSpec{7}, 4);
    EXPECT_NE(d.next_u32(), e.next_u32());
    for (int i = 0; i < 1000; ++i) {
        const double u = d.next_double();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(RandomStream, Threshold) {
    EXPECT_EQ(probability_threshold(0.0), 0u);
    EXPECT_EQ(probability_threshold(-1.0), 0u);
    EXPECT_EQ(probability_threshold(1.0), std::uint64_t{1} << 32);
    EXPECT_EQ(probability_threshold(0.5), std::uint64_t{1} << 31);
}

TEST(Decoder, AgreesWithQuantumOracleOnEveryPattern) {
    for (const auto& t : enumerate_trees(11, 10)) {
        LossDecoder decoder(t);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << decoder.photon_count()); ++mask) {
            const LossPattern loss = LossPattern::from_mask(t, mask);
            ASSERT_EQ(decoder.success(loss), quantum_recoverable(t, loss)) << to_string(t) << " mask " << mask;
            ASSERT_EQ(decode_success(t, loss), structural_success(t, loss));
        }
    }
}

TEST(Decoder, PlanUsesFirstArrivedPartner) {
    const BranchingVector t{2, 2};
    LossDecoder decoder(t);
    // Photon 0 (vertex 1) lost, together with one child (vertex 3) of it.
    LossPattern loss = LossPattern::none(t);
    loss.lost[0] = 1;
    loss.lost[2] = 1;
    const DecodePlan plan = decoder.plan(loss);
    EXPECT_TRUE(plan.success);
    EXPECT_EQ(plan.bell_partner, 2);
    EXPECT_EQ(plan.basis[1], Basis::Lost);
    EXPECT_EQ(plan.basis[3], Basis::Lost);
    EXPECT_EQ(plan.basis[4], Basis::X);
    EXPECT_EQ(plan.basis[5], Basis::Z);
    EXPECT_EQ(plan.basis[6], Basis::Z);
}

TEST(Decoder, RejectsBadPattern) {
    LossDecoder decoder({2, 2});
    LossPattern wrong;
    wrong.lost.assign(3, 0);
    EXPECT_THROW(decoder.success(wrong), std::invalid_argument);
    EXPECT_EQ(LossPattern::from_mask({2, 2}, 0b101).lost_count(), 2);
}

TEST(MonteCarlo, EtaAgreesWithRecursion) {
    MonteCarloOptions opts;
    opts.trials = 100000;
    for (const auto& t : enumerate_trees(13, 12)) {
        for (double mu : {0.05, 0.1, 0.2, 0.5}) {
            const TransmissionEstimate est = sample_eta_e(t, mu, opts);
            const double exact = encoded_transmission(t, mu);
            const double sigma = std::sqrt(std::max(exact * (1 - exact), 1e-12) / static_cast<double>(opts.trials));
            ASSERT_LE(std::abs(est.estimate - exact), 4 * sigma + 1e-12) << to_string(t) << " mu=" << mu;
        }
    }
}

TEST(MonteCarlo, EtaLargeTree) {
    MonteCarloOptions opts;
    opts.trials = 200000;
    const TransmissionEstimate est = sample_eta_e({4, 14, 4}, 0.1657, opts);
    EXPECT_NEAR(est.estimate, encoded_transmission(BranchingVector{4, 14, 4}, 0.1657), 4 * est.std_error);
}

TEST(MonteCarlo, ReproducibleAcrossWorkerCounts) {
    MonteCarloOptions one;
    one.trials = 70000;
    one.rng.seed = 99;
    MonteCarloOptions many = one;
    many.jobs = 4;
    const auto a = sample_eta_e({3, 5, 2}, 0.3, one);
    const auto b = sample_eta_e({3, 5, 2}, 0.3, many);
    EXPECT_EQ(a.successes, b.successes);
    const auto c = simulate_reencoding_error({3, 5, 2}, 0.2, 0.01, one);
    const auto d = simulate_reencoding_error({3, 5, 2}, 0.2, 0.01, many);
    EXPECT_EQ(c.errors, d.errors);
    EXPECT_EQ(c.decoded, d.decoded);
    EXPECT_EQ(c.eps_r, d.eps_r);
    MonteCarloOptions other = one;
    other.rng.seed = 100;
    EXPECT_NE(sample_eta_e({3, 5, 2}, 0.3, other).successes, a.successes);
}

TEST(MonteCarlo, NoNoiseNoError) {
    MonteCarloOptions opts;
    opts.trials = 20000;
    const auto r = simulate_reencoding_error({4, 14, 4}, 0.16, 0.0, opts);
    EXPECT_EQ(r.errors, 0u);
    EXPECT_GT(r.decoded, 19900u);
}

TEST(MonteCarlo, ErrorMonotoneInEps) {
    MonteCarloOptions opts;
    opts.trials = 40000;
    double prev = 0;
    for (double eps : {0.0, 1e-3, 3e-3, 1e-2, 3e-2}) {
        const double e = simulate_reencoding_error({3, 6, 3}, 0.15, eps, opts).eps_r;
        EXPECT_GE(e, prev);
        prev = e;
    }
}

TEST(MonteCarlo, RootAndPartnerFaultsAlwaysFail) {
    const BranchingVector t{2, 2};
    LossDecoder decoder(t);
    ASSERT_TRUE(decoder.success(LossPattern::none(t)));
    std::vector<Pauli> faults(7, Pauli::I);
    EXPECT_FALSE(reencoding_fails(decoder, faults.data()));
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        faults.assign(7, Pauli::I);
        faults[0] = p;
        EXPECT_TRUE(reencoding_fails(decoder, faults.data()));
        faults.assign(7, Pauli::I);
        faults[static_cast<std::size_t>(decoder.bell_partner())] = p;
        EXPECT_TRUE(reencoding_fails(decoder, faults.data()));
    }
}

TEST(MonteCarlo, ZFaultOnZMeasuredQubitIsHarmless) {
    const BranchingVector t{2, 2};
    LossDecoder decoder(t);
    ASSERT_TRUE(decoder.success(LossPattern::none(t)));
    std::vector<Pauli> faults(7, Pauli::I);
    faults[2] = Pauli::Z;  // other first-level qubit, measured in z
    EXPECT_FALSE(reencoding_fails(decoder, faults.data()));
    // Its z value gets three votes: the direct outcome and its two x-measured leaves.
    faults[2] = Pauli::X;
    EXPECT_FALSE(reencoding_fails(decoder, faults.data()));
    faults[5] = Pauli::Z;
    EXPECT_TRUE(reencoding_fails(decoder, faults.data()));
    // Children of the Bell partner are leaves with a single vote each.
    faults.assign(7, Pauli::I);
    faults[3] = Pauli::X;
    EXPECT_TRUE(reencoding_fails(decoder, faults.data()));
    faults[3] = Pauli::Z;
    EXPECT_FALSE(reencoding_fails(decoder, faults.data()));
}

TEST(MonteCarlo, InversionHitsTarget) {
    MonteCarloOptions opts;
    opts.trials = 100000;
    EXPECT_EQ(invert_error_map({3, 6, 3}, 0.15, 0.0, opts).eps, 0.0);
    const InversionResult lo = invert_error_map({3, 6, 3}, 0.15, 1e-3, opts);
    const InversionResult hi = invert_error_map({3, 6, 3}, 0.15, 3e-3, opts);
    EXPECT_LE(std::abs(lo.at_eps.eps_r - 1e-3), 2 * lo.at_eps.std_error);
    EXPECT_LT(lo.eps, hi.eps);
    EXPECT_THROW(invert_error_map({3, 6, 3}, 0.15, 1.5, opts), std::invalid_argument);
}
