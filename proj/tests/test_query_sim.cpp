#include <gtest/gtest.h>

#include <cmath>

#include "qerr/query_sim.hpp"

using namespace qerr;

namespace {
BitInput bits(const char* s) { return BitInput::parse(s); }
}  // namespace

TEST(TheoreticalErr, Values) {
    EXPECT_EQ(theoretical_err(1), Rational(0));
    EXPECT_EQ(theoretical_err(2), Rational(1, 10));
    EXPECT_EQ(theoretical_err(5), Rational(4, 13));
    EXPECT_LE(theoretical_err(5), Rational(7, 16));
    EXPECT_THROW(theoretical_err(0), DomainError);
}

TEST(ClassicalReference, Values) {
    EXPECT_EQ(classical_reference(2), std::make_pair(Rational(1, 2), Rational(1, 3)));
    EXPECT_EQ(classical_reference(3), std::make_pair(Rational(1, 2), Rational(2, 5)));
    EXPECT_EQ(classical_reference(10), std::make_pair(Rational(1, 2), Rational(1, 2) - Rational(1, 38)));
}

TEST(EqAcceptProbability, Examples) {
    EXPECT_EQ(eq_accept_probability(bits("000")), Rational(9, 10));
    EXPECT_EQ(eq_accept_probability(bits("100")), Rational(1, 10));
    EXPECT_EQ(eq_accept_probability(bits("1010")), Rational(0));
    EXPECT_THROW(eq_accept_probability(bits("1")), DomainError);
}

TEST(EqErrorProbability, Examples) {
    EXPECT_EQ(eq_error_probability(bits("111")), Rational(1, 10));
    EXPECT_EQ(eq_error_probability(bits("100")), Rational(1, 10));
    EXPECT_EQ(eq_error_probability(bits("1100")), Rational(0));
}

TEST(EqDistribution, Normalized) {
    for (unsigned len = 2; len <= 10; ++len)
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
            const auto d = eq_distribution(BitInput::from_mask(mask, len));
            ASSERT_EQ(d.p_output1 + d.p_output0, Rational(1));
            ASSERT_GE(d.p_output1, Rational(0));
            ASSERT_GE(d.p_output0, Rational(0));
        }
}

TEST(WorstCaseErrorEq, SmallLengths) {
    EXPECT_EQ(worst_case_error_eq(3), Rational(1, 10));
    EXPECT_EQ(worst_case_error_eq(4), Rational(1, 5));
    EXPECT_EQ(worst_case_error_eq(2), Rational(0));
}

TEST(WorstCaseErrorEq, MaximizersAreConstantOrSingleMinority) {
    for (unsigned len = 3; len <= 16; ++len) {
        const auto wc = worst_case_eq(len);
        ASSERT_EQ(wc.error, theoretical_err(len - 1)) << len;
        // The worst inputs: all-equal ones and those with one differing bit.
        EXPECT_EQ(wc.maximizers.size(), 2 + 2 * len) << len;
        for (const auto& x : wc.maximizers) {
            const int m = std::abs(x.sign_sum());
            EXPECT_TRUE(m == static_cast<int>(len) || m == static_cast<int>(len) - 2) << x.str();
        }
    }
}

TEST(EqAcceptProbability, MonotoneInAbsoluteSignSum) {
    for (unsigned len = 2; len <= 12; ++len) {
        std::vector<Rational> by_abs(len + 1, Rational(-1));
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
            const auto x = BitInput::from_mask(mask, len);
            const auto a = eq_accept_probability(x);
            auto& slot = by_abs[std::abs(x.sign_sum())];
            if (slot.sign() < 0) slot = a;
            ASSERT_EQ(slot, a);  // depends on |sign_sum| only
        }
        Rational prev(-1);
        for (const auto& v : by_abs) {
            if (v.sign() < 0) continue;
            EXPECT_GE(v, prev);
            prev = v;
        }
    }
}

TEST(AndAcceptProbability, Examples) {
    EXPECT_EQ(and_accept_probability(bits("11")), Rational(9, 10));
    EXPECT_EQ(and_accept_probability(bits("01")), Rational(1, 10));
    EXPECT_EQ(and_accept_probability(bits("00")), Rational(1, 10));
}

TEST(AndReduction, WorstCaseMatchesClosedForm) {
    for (unsigned n = 1; n <= 12; ++n) EXPECT_EQ(worst_case_and(n).error, theoretical_err(n)) << n;
}

TEST(SimulateState, Examples) {
    EXPECT_NEAR(simulated_first_state_probability(bits("000")), 1.0, 1e-12);
    EXPECT_NEAR(simulated_first_state_probability(bits("100")), 1.0 / 9.0, 1e-12);
    EXPECT_NEAR(simulated_first_state_probability(bits("10")), 0.0, 1e-12);
}

TEST(SimulateState, UnitNormAndExactAgreement) {
    for (unsigned len = 2; len <= 9; ++len)
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
            const auto x = BitInput::from_mask(mask, len);
            const auto st = simulate_state(x);
            ASSERT_EQ(st.dim(), len);
            ASSERT_NEAR(st.norm_squared(), 1.0, 1e-12);
            ASSERT_NEAR(std::norm(st.amplitudes[0]), exact_first_state_probability(x).to_double(), 1e-12);
        }
}

TEST(Sample, ZeroProbabilityNeverFires) {
    const auto c = sample(bits("1010"), 1000, 99);
    EXPECT_EQ(c.output1, 0U);
    EXPECT_EQ(c.output0, 1000U);
}

TEST(Sample, ConcentratesAtExactProbability) {
    const auto c = sample(bits("111"), 100000, 2024);
    EXPECT_EQ(c.output1 + c.output0, 100000U);
    EXPECT_NEAR(static_cast<double>(c.output1) / 100000.0, 0.9, 5e-3);
}

TEST(Sample, DeterministicForFixedSeed) {
    const auto a = sample(bits("00"), 100, 7), b = sample(bits("00"), 100, 7);
    EXPECT_EQ(a.output1, b.output1);
    EXPECT_EQ(a.output0, b.output0);
    EXPECT_THROW(sample(bits("00"), 0, 7), DomainError);
}

TEST(BitInput, Parse) {
    EXPECT_THROW(BitInput::parse("01a"), DomainError);
    EXPECT_THROW(BitInput::parse(""), DomainError);
    EXPECT_EQ(bits("0110").sign_sum(), 0);
    EXPECT_EQ(bits("0110").str(), "0110");
}
