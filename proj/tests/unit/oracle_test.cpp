#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "cardcsp/cardinal_dist.hpp"
#include "cardcsp/errors.hpp"
#include "cardcsp/oracle.hpp"
#include "test_support.hpp"

namespace cardcsp {
namespace {

using testing::data_path;
using testing::random_poly;

TEST(SliceWalk, VisitsEveryAssignmentOnce) {
  std::set<std::vector<int>> seen;
  Assignment tracked;
  for_each_slice_assignment(7, 3, [&](const Assignment& a, const std::vector<std::uint32_t>&) {
    EXPECT_EQ(a.count(-1), 3U);
    seen.insert(a.values());
  });
  EXPECT_EQ(seen.size(), 35U);
}

TEST(SliceWalk, IncrementalEvaluationMatchesDirect) {
  std::mt19937_64 rng(1);
  const auto f = random_poly(rng, 9, 3, 15, Basis::phi(Rational(1, 3)));
  IncrementalEvaluator eval(f);
  for_each_slice_assignment(9, 3, [&](const Assignment& a, const std::vector<std::uint32_t>& ch) {
    EXPECT_EQ(eval.update(a, ch), evaluate(f, a));
  });
}

TEST(BruteOpt, FrozenCorpusValues) {
  struct Case {
    const char* file;
    std::uint64_t opt;
    Rational average;
  };
  const Case cases[] = {{"k4.csp", 4, 4},
                        {"p4.csp", 3, 2},
                        {"star6.csp", 3, 3},
                        {"c6_third.csp", 4, Rational(16, 5)},
                        {"threeway.csp", 3, Rational(29, 15)},
                        {"edge.csp", 1, 1}};
  for (const auto& c : cases) {
    const auto parsed = read_instance_file(data_path(c.file));
    const auto best = brute_opt(parsed.instance, parsed.cardinality);
    EXPECT_EQ(best.opt, c.opt) << c.file;
    EXPECT_EQ(best.average, c.average) << c.file;
    EXPECT_EQ(constraint_count(parsed.instance, best.argmax), c.opt);
    EXPECT_TRUE(parsed.cardinality.admits(best.argmax));
  }
}

TEST(BruteOpt, ArgmaxIsLexicographicallySmallest) {
  const auto parsed = read_instance_file(data_path("p4.csp"));
  const auto best = brute_opt(parsed.instance, parsed.cardinality);
  // Cuts all three edges: alternating signs, the smaller one starts with -1.
  EXPECT_EQ(best.argmax, Assignment({-1, 1, -1, 1}));
}

TEST(BruteOpt, EmptyInstanceAndCap) {
  const CspInstance empty(6, 2);
  const GlobalCardinality card(6, Rational(1, 2));
  EXPECT_EQ(brute_opt(empty, card).opt, 0U);
  OracleOptions tight;
  tight.cap = 10;
  EXPECT_THROW(brute_opt(empty, card, tight), ResourceError);
}

TEST(BruteOpt, ThreadedAgreesWithSerial) {
  std::mt19937_64 rng(44);
  OracleOptions threaded;
  threaded.threads = 4;
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = testing::random_instance(rng, 10, 3, 20);
    const GlobalCardinality card(10, Rational(3, 10));
    const auto serial = brute_opt(inst, card);
    const auto parallel = brute_opt(inst, card, threaded);
    EXPECT_EQ(serial.opt, parallel.opt);
    EXPECT_EQ(serial.argmax, parallel.argmax);
    EXPECT_EQ(serial.average, parallel.average);
  }
}

TEST(BruteMoment, Examples) {
  const GlobalCardinality card(4, Rational(1, 2));
  const Basis phi = Basis::phi(Rational(1, 2));
  const auto sum = MultilinearPoly::variable_sum(4, phi);
  for (int k : {1, 2, 4}) EXPECT_TRUE(brute_moment(sum, card, k).is_zero());
  const auto pair = MultilinearPoly::monomial(4, phi, {1, 2}, 1);
  EXPECT_EQ(brute_moment(pair, card, 1), QuadScalar(Rational(-1, 3)));
  const GlobalCardinality third(6, Rational(1, 3));
  const auto sum_third = MultilinearPoly::variable_sum(6, Basis::phi(Rational(1, 3)));
  for (int k : {1, 2, 4}) EXPECT_TRUE(brute_moment(sum_third, third, k).is_zero());
}

TEST(HyperRatio, ConstantIsOne) {
  const GlobalCardinality card(6, Rational(1, 2));
  const auto f = MultilinearPoly::constant(6, Basis::chi(), 3);
  EXPECT_EQ(hyper_ratio(f, card).over_second_moment_sq, 1.0L);
  EXPECT_THROW(hyper_ratio(MultilinearPoly(6), card), DegenerateInput);
}

TEST(RestrictionGap, ConstantAndSingleVariable) {
  const GlobalCardinality card(8, Rational(1, 2));
  const Basis phi = Basis::phi(Rational(1, 2));
  EXPECT_TRUE(restriction_gap(MultilinearPoly::constant(8, phi, 2), card, 1).gap.is_zero());
  const auto g = MultilinearPoly::monomial(8, phi, {2}, 1);
  const auto result = restriction_gap(g, card, 1);
  // g^2 = 1 everywhere, so both conditional second moments are 1.
  EXPECT_TRUE(result.gap.is_zero());
  EXPECT_LE(result.gap.to_long_double(), result.bound);
  const auto h = MultilinearPoly::monomial(8, phi, {2, 3}, 1) +
                 MultilinearPoly::monomial(8, phi, {2}, 1);
  const auto gap = restriction_gap(h, card, 1);
  EXPECT_LE(gap.gap.to_long_double(), gap.bound);
  EXPECT_THROW(restriction_gap(h, card, 2), InputError);
}

TEST(BruteForceDecision, Examples) {
  const auto p4 = read_instance_file(data_path("p4.csp"));
  const auto k4 = read_instance_file(data_path("k4.csp"));
  EXPECT_TRUE(brute_force_decision(p4.instance, p4.cardinality, 1));
  EXPECT_FALSE(brute_force_decision(k4.instance, k4.cardinality, 1));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = testing::random_instance(rng, 8, 3, 12);
    EXPECT_TRUE(brute_force_decision(inst, GlobalCardinality(8, Rational(1, 4)), 0));
  }
}

TEST(AveragedRestrictedVariance, NeverExceedsSliceVariance) {
  std::mt19937_64 rng(10);
  for (const Rational p : {Rational(1, 5), Rational(3, 10), Rational(2, 5), Rational(1, 2),
                           Rational(7, 10)}) {
    const GlobalCardinality card(10, p);
    const CardinalDist dist(10, p);
    for (int trial = 0; trial < 4; ++trial) {
      const auto f = random_poly(rng, 10, 3, 12);
      const QuadScalar averaged = averaged_restricted_variance(f, card);
      const QuadScalar full = variance(f, dist);
      EXPECT_LE(averaged, full);
      if (p == Rational(1, 2)) EXPECT_EQ(averaged, full);
    }
  }
}

TEST(ProductMeasure, SecondMomentIsNormSquared) {
  const Basis phi = Basis::phi(Rational(1, 3));
  auto f = MultilinearPoly::monomial(4, phi, {1, 2}, 2);
  f.add_term({3}, -1);
  EXPECT_EQ(product_measure_moment(f, Rational(1, 3), 2), QuadScalar(5));
  EXPECT_TRUE(product_measure_moment(f, Rational(1, 3), 1).is_zero());
}

}  // namespace
}  // namespace cardcsp
