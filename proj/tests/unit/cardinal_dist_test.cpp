#include <gtest/gtest.h>

#include <map>

#include "cardcsp/cardinal_dist.hpp"
#include "cardcsp/errors.hpp"
#include "cardcsp/oracle.hpp"
#include "test_support.hpp"

namespace cardcsp {
namespace {

using testing::random_poly;

QuadScalar root_times(const Rational& coeff, long radicand) { return QuadScalar(0, coeff, radicand); }

TEST(DeltaSequence, LeadingValues) {
  for (const auto& [n, p] : std::vector<std::pair<std::uint32_t, Rational>>{
           {4, Rational(1, 2)}, {6, Rational(1, 3)}, {12, Rational(1, 4)}, {10, Rational(3, 10)}}) {
    const auto delta = delta_sequence(n, p, 2);
    EXPECT_EQ(delta[0], QuadScalar(1));
    EXPECT_EQ(delta[1], QuadScalar(0));
    EXPECT_EQ(delta[2], QuadScalar(Rational(-1, n - 1)));
  }
}

TEST(DeltaSequence, FourVariableBisection) {
  EXPECT_EQ(delta_sequence(4, Rational(1, 2), 4)[4], QuadScalar(1));
}

TEST(DeltaSequence, KmaxBeyondNThrows) {
  EXPECT_THROW(delta_sequence(4, Rational(1, 2), 5), InputError);
}

TEST(DeltaSequence, FrozenEnumerationValues) {
  // Slice averages of products of phi values, enumerated independently.
  const std::vector<QuadScalar> n6_third{1, 0, Rational(-1, 5), root_times(Rational(-1, 20), 2),
                                         Rational(3, 20), root_times(Rational(1, 4), 2),
                                         Rational(1, 2)};
  EXPECT_EQ(delta_sequence(6, Rational(1, 3), 6), n6_third);
  const std::vector<QuadScalar> n8_quarter{1,
                                           0,
                                           Rational(-1, 7),
                                           root_times(Rational(-2, 63), 3),
                                           Rational(1, 21),
                                           root_times(Rational(4, 63), 3),
                                           Rational(25, 189),
                                           root_times(Rational(2, 27), 3),
                                           Rational(1, 9)};
  EXPECT_EQ(delta_sequence(8, Rational(1, 4), 8), n8_quarter);
  const auto n10 = delta_sequence(10, Rational(3, 10), 10);
  EXPECT_EQ(n10[3], root_times(Rational(-1, 189), 21));
  EXPECT_EQ(n10[7], root_times(Rational(-101, 7203), 21));
  EXPECT_EQ(n10[10], QuadScalar(Rational(-9, 49)));
}

TEST(DeltaSequence, MatchesOracleSliceAverages) {
  for (const auto& [n, p] : std::vector<std::pair<std::uint32_t, Rational>>{
           {8, Rational(1, 2)}, {9, Rational(1, 3)}, {12, Rational(1, 4)}, {14, Rational(1, 2)}}) {
    const CardinalDist dist(n, p);
    const GlobalCardinality card(n, p);
    for (std::size_t k = 0; k <= 6; ++k) {
      Subset s;
      for (std::uint32_t i = 1; i <= k; ++i) s.push_back(i);
      const auto f = MultilinearPoly::monomial(n, dist.basis(), s, 1);
      EXPECT_EQ(brute_moment(f, card, 1), dist.delta(k)) << "n=" << n << " k=" << k;
    }
  }
}

TEST(DeltaSequence, RecurrenceHoldsExactly) {
  for (const Rational p : {Rational(1, 2), Rational(1, 3), Rational(1, 5)}) {
    const std::uint32_t n = 30;
    const CardinalDist dist(n, p);
    for (std::size_t k = 1; k < 10; ++k) {
      const QuadScalar kk(static_cast<long>(k));
      const QuadScalar lhs = kk * dist.delta(k - 1) + kk * dist.q() * dist.delta(k) +
                             QuadScalar(static_cast<long>(n - k)) * dist.delta(k + 1);
      EXPECT_TRUE(lhs.is_zero());
    }
  }
}

TEST(DeltaSequence, ClosedFormAtHalf) {
  for (std::uint32_t n : {8U, 10U, 20U, 40U}) {
    const CardinalDist dist(n, Rational(1, 2));
    Rational num = 1;
    Rational den = 1;
    for (std::uint32_t i = 1; i <= 3; ++i) {
      num *= 2 * i - 1;
      den *= n - 2 * i + 1;
      const Rational expected = (i % 2 == 0 ? 1 : -1) * num / den;
      EXPECT_EQ(dist.delta(2 * i), QuadScalar(expected));
      EXPECT_TRUE(dist.delta(2 * i - 1).is_zero());
    }
  }
}

TEST(Expectation, MaxBisectionAverage) {
  std::mt19937_64 rng(4);
  for (std::uint32_t n : {4U, 6U, 8U, 10U}) {
    const CardinalDist dist(n, Rational(1, 2));
    // random graph
    CspInstance g(n, 2);
    for (std::uint32_t u = 1; u <= n; ++u) {
      for (std::uint32_t v = u + 1; v <= n; ++v) {
        if (uniform_below(rng, 2) != 0) g.add_constraint(cut_constraint(u, v));
      }
    }
    const Rational m(static_cast<unsigned long>(g.size()));
    const Rational expected = (Rational(1, 2) + Rational(1, 2 * (n - 1))) * m;
    EXPECT_EQ(expectation(to_polynomial(g), dist), QuadScalar(expected));
  }
}

TEST(Expectation, ConstantAndMismatch) {
  const CardinalDist dist(6, Rational(1, 3));
  EXPECT_EQ(expectation(MultilinearPoly::constant(6, Basis::chi(), 7), dist), QuadScalar(7));
  const auto wrong = MultilinearPoly::monomial(6, Basis::phi(Rational(1, 2)), {1}, 1);
  EXPECT_THROW(expectation(wrong, dist), InputError);
}

TEST(Moments, MatchOracleOnRandomPolynomials) {
  std::mt19937_64 rng(8);
  const std::vector<std::pair<std::uint32_t, Rational>> cases{
      {10, Rational(3, 10)}, {8, Rational(1, 4)}, {9, Rational(1, 3)}, {10, Rational(1, 2)},
      {12, Rational(1, 2)}};
  for (const auto& [n, p] : cases) {
    const CardinalDist dist(n, p);
    const GlobalCardinality card(n, p);
    for (int trial = 0; trial < 10; ++trial) {
      const auto f = random_poly(rng, n, 3, 10);
      const SliceMoments m = brute_moments(f, card);
      EXPECT_EQ(expectation(f, dist), m.first);
      EXPECT_EQ(second_moment(f, dist), m.second);
      EXPECT_EQ(variance(f, dist), m.variance());
      EXPECT_GE(variance(f, dist).sign(), 0);
      const auto g = convert_basis(random_poly(rng, n, 2, 8), dist.basis());
      EXPECT_EQ(second_moment(g, dist), brute_moment(g, card, 2));
    }
  }
}

TEST(Moments, CompleteGraphAndStarHaveZeroVariance) {
  for (std::uint32_t n : {4U, 6U, 8U, 10U}) {
    const CardinalDist dist(n, Rational(1, 2));
    EXPECT_TRUE(variance(to_polynomial(testing::complete_graph(n)), dist).is_zero());
    EXPECT_TRUE(variance(to_polynomial(testing::star_graph(n)), dist).is_zero());
  }
}

TEST(Moments, NullSpaceIdentities) {
  std::mt19937_64 rng(13);
  for (const Rational p : {Rational(1, 2), Rational(1, 3), Rational(1, 4)}) {
    const std::uint32_t n = 12;
    const CardinalDist dist(n, p);
    const auto sum = MultilinearPoly::variable_sum(n, dist.basis());
    for (int trial = 0; trial < 34; ++trial) {
      const auto g = random_poly(rng, n, 2, 6, dist.basis());
      const auto prod = multiply(sum, g);
      EXPECT_TRUE(expectation(prod, dist).is_zero());
      // c + (sum_i phi_i) h is constant on the slice.
      if (trial < 8) {
        const auto shifted = prod + MultilinearPoly::constant(n, dist.basis(), 5);
        EXPECT_TRUE(variance(shifted, dist).is_zero());
      }
    }
  }
}

TEST(Sample, RespectsCardinality) {
  const CardinalDist half(4, Rational(1, 2));
  const CardinalDist third(6, Rational(1, 3));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    EXPECT_EQ(sample(half, seed).count(-1), 2U);
    EXPECT_EQ(sample(third, seed).count(-1), 2U);
  }
  EXPECT_EQ(sample(third, 99), sample(third, 99));
}

TEST(Sample, UniformOverBisections) {
  const CardinalDist dist(6, Rational(1, 2));
  std::mt19937_64 rng(2024);
  std::map<std::vector<int>, int> freq;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++freq[sample(dist, rng).values()];
  ASSERT_EQ(freq.size(), 20U);
  for (const auto& [values, count] : freq) {
    EXPECT_NEAR(static_cast<double>(count) / draws, 0.05, 0.005);
  }
}

TEST(MonteCarlo, ConstantIsExact) {
  const CardinalDist dist(8, Rational(1, 4));
  const auto f = MultilinearPoly::constant(8, Basis::chi(), 3);
  for (int power : {1, 2, 4}) {
    const auto est = mc_moment(f, dist, power, 1000, 1);
    EXPECT_EQ(est.estimate, std::pow(3.0, power));
    EXPECT_EQ(est.standard_error, 0.0);
  }
  EXPECT_THROW(mc_moment(f, dist, 2, 0, 1), InputError);
}

TEST(MonteCarlo, SecondMomentConsistentAtThirty) {
  std::mt19937_64 rng(30);
  for (const Rational p : {Rational(1, 2), Rational(1, 3)}) {
    const CardinalDist dist(30, p);
    const auto f = random_poly(rng, 30, 2, 20, dist.basis());
    const auto est = mc_moment(f, dist, 2, 40000, 77);
    EXPECT_LE(std::abs(est.estimate - second_moment(f, dist).to_double()),
              4 * est.standard_error);
  }
}

TEST(MonteCarlo, FourthMomentRatioWithinBound) {
  std::mt19937_64 rng(31);
  const CardinalDist dist(30, Rational(1, 2));
  for (int trial = 0; trial < 3; ++trial) {
    const auto f = random_poly(rng, 30, 2, 25);
    const auto est = mc_moment(f, dist, 4, 20000, 5 + trial);
    const double second = second_moment(f, dist).to_double();
    EXPECT_LE(est.estimate / (second * second), 12.0 * 2 * 6561);
  }
}

}  // namespace
}  // namespace cardcsp
