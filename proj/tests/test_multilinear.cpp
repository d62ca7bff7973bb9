#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "qerr/multilinear.hpp"

using namespace qerr;

namespace {

MultilinearPoly x(unsigned n, unsigned i) { return MultilinearPoly::variable(n, i); }
MultilinearPoly one(unsigned n) { return MultilinearPoly::constant(n, 1); }

}  // namespace

TEST(EvalMultilinear, Examples) {
    EXPECT_EQ(eval_multilinear(x(2, 1), SignVector({-1, 1})), Rational(-1));
    EXPECT_EQ(eval_multilinear(one(2) + x(2, 1) * x(2, 2), SignVector({-1, -1})), Rational(2));
    EXPECT_EQ(eval_multilinear(x(2, 1) - x(2, 2), SignVector({1, -1})), Rational(2));
}

TEST(EvalMultilinear, DimensionMismatch) {
    EXPECT_THROW(eval_multilinear(x(2, 1), SignVector({1, 1, 1})), DimensionError);
}

TEST(SignVector, RejectsNonSigns) {
    EXPECT_THROW(SignVector({1, 0}), DomainError);
    EXPECT_THROW(SignVector(std::vector<int>{}), DomainError);
    EXPECT_EQ(SignVector({-1, 1, -1}).weight(), 2U);
}

TEST(Multiply, Examples) {
    EXPECT_EQ(multiply(x(1, 1), x(1, 1)), one(1));
    const auto sum = x(2, 1) + x(2, 2);
    EXPECT_EQ(multiply(sum, sum), one(2) * Rational(2) + x(2, 1) * x(2, 2) * Rational(2));
    const auto diff = x(2, 1) - x(2, 2);
    EXPECT_EQ(multiply(diff, diff), one(2) * Rational(2) - x(2, 1) * x(2, 2) * Rational(2));
}

TEST(Multiply, DimensionMismatch) { EXPECT_THROW(multiply(x(2, 1), x(3, 1)), DimensionError); }

TEST(Multiply, EvaluationHomomorphismExhaustive) {
    std::mt19937_64 gen(11);
    for (unsigned n = 1; n <= 6; ++n) {
        for (int trial = 0; trial < 6; ++trial) {
            const auto p = oracle::random_poly(gen, n, n), q = oracle::random_poly(gen, n, n);
            const auto pq = multiply(p, q);
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
                const auto v = SignVector::from_bits(mask, n);
                ASSERT_EQ(pq.eval(v), p.eval(v) * q.eval(v)) << "n=" << n << " mask=" << mask;
                ASSERT_EQ(p.eval(v), oracle::eval_direct(p, v.entries()));
            }
        }
    }
}

TEST(Multiply, SquareDegreeBound) {
    std::mt19937_64 gen(12);
    for (unsigned n = 1; n <= 8; ++n) {
        const auto p = oracle::random_poly(gen, n, 3);
        if (p.is_zero()) continue;
        EXPECT_LE(multiply(p, p).degree(), 2 * p.degree());
    }
}

TEST(Degree, ZeroPolynomial) {
    MultilinearPoly z(3);
    EXPECT_EQ(z.degree(), -1);
    EXPECT_TRUE((x(3, 1) - x(3, 1)).is_zero());
}

TEST(ElementarySymmetric, Examples) {
    EXPECT_EQ(elementary_symmetric(3, 0), one(3));
    EXPECT_EQ(elementary_symmetric(3, 1), x(3, 1) + x(3, 2) + x(3, 3));
    EXPECT_EQ(elementary_symmetric(3, 3), x(3, 1) * x(3, 2) * x(3, 3));
    EXPECT_THROW(elementary_symmetric(3, 4), DomainError);
}

TEST(ElementarySymmetric, MatchesCountingFormulaAtEveryWeight) {
    // S_m at a weight-s point equals Σ_k (-1)^k C(s,k) C(n-s,m-k).
    for (unsigned n = 1; n <= 8; ++n)
        for (unsigned m = 0; m <= n; ++m) {
            const auto sm = elementary_symmetric(n, m);
            EXPECT_EQ(sm.terms().size(), binomial(n, m).get_ui());
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
                const auto v = SignVector::from_bits(mask, n);
                const unsigned s = v.weight();
                Integer expect = 0;
                for (unsigned k = 0; k <= std::min(s, m); ++k) {
                    if (m - k > n - s) continue;
                    const Integer t = binomial(s, k) * binomial(n - s, m - k);
                    expect += (k % 2 ? -t : t);
                }
                ASSERT_EQ(sm.eval(v), Rational(expect)) << n << " " << m << " " << mask;
            }
        }
}

TEST(BasisPoly, Examples) {
    const std::vector<IndexPair> p12{{1, 2}};
    const std::vector<Rational> a1{1}, a10{1, 0}, a01{0, 1};
    EXPECT_EQ(basis_poly(2, p12, a1), x(2, 1) - x(2, 2));
    EXPECT_EQ(basis_poly(3, p12, a10), x(3, 1) - x(3, 2));
    EXPECT_EQ(basis_poly(3, p12, a01), x(3, 1) * x(3, 3) - x(3, 2) * x(3, 3));
}

TEST(BasisPoly, Errors) {
    const std::vector<IndexPair> overlap{{1, 2}, {2, 3}};
    const std::vector<Rational> a{1, 1};
    EXPECT_THROW(basis_poly(4, overlap, std::vector<Rational>{1}), DomainError);
    const std::vector<IndexPair> p12{{1, 2}};
    EXPECT_THROW(basis_poly(3, p12, std::vector<Rational>{1}), DomainError);  // alpha needs 2 entries
    const std::vector<IndexPair> out_of_range{{1, 5}};
    EXPECT_THROW(basis_poly(4, out_of_range, std::vector<Rational>{1, 1, 1}), DomainError);
}

TEST(Permuted, RelabelsVariables) {
    const auto p = x(3, 1) * x(3, 2) + x(3, 3) * Rational(5);
    const std::vector<unsigned> perm{3, 1, 2};
    EXPECT_EQ(p.permuted(perm), x(3, 3) * x(3, 1) + x(3, 2) * Rational(5));
}
