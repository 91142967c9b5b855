#include <gtest/gtest.h>

#include "cardcsp/errors.hpp"
#include "cardcsp/scalar.hpp"
#include "cardcsp/subsets.hpp"

namespace cardcsp {
namespace {

TEST(QuadScalar, SquareRadicandCollapsesToRational) {
  EXPECT_EQ(QuadScalar::sqrt_of(Rational(4, 9)), QuadScalar(Rational(2, 3)));
  EXPECT_TRUE(QuadScalar::sqrt_of(Rational(1, 4)).is_rational());
  EXPECT_FALSE(QuadScalar::sqrt_of(Rational(2, 9)).is_rational());
}

TEST(QuadScalar, FieldArithmetic) {
  const QuadScalar s = QuadScalar::sqrt_of(2);
  EXPECT_EQ(s * s, QuadScalar(2));
  const QuadScalar x = QuadScalar(1) + s;
  const QuadScalar inv = QuadScalar(1) / x;
  EXPECT_EQ(x * inv, QuadScalar(1));
  EXPECT_EQ(inv, QuadScalar(-1, 1, 2));
  EXPECT_TRUE((x - x).is_zero());
}

TEST(QuadScalar, ExactSign) {
  // 7/5 < sqrt(2) < 17/12
  EXPECT_EQ((QuadScalar(Rational(7, 5)) - QuadScalar::sqrt_of(2)).sign(), -1);
  EXPECT_EQ((QuadScalar(Rational(17, 12)) - QuadScalar::sqrt_of(2)).sign(), 1);
  EXPECT_LT(QuadScalar::sqrt_of(2), QuadScalar(Rational(17, 12)));
  EXPECT_EQ(QuadScalar().sign(), 0);
}

TEST(QuadScalar, MixingFieldsThrows) {
  EXPECT_THROW(QuadScalar::sqrt_of(2) + QuadScalar::sqrt_of(3), std::domain_error);
  EXPECT_EQ(compare_mixed(QuadScalar::sqrt_of(2), QuadScalar::sqrt_of(3)), -1);
}

TEST(QuadScalar, PowerAndDouble) {
  EXPECT_EQ(pow(QuadScalar::sqrt_of(2), 4), QuadScalar(4));
  EXPECT_NEAR(QuadScalar::sqrt_of(2).to_double(), 1.41421356237, 1e-10);
}

TEST(RationalParsing, AcceptsFractionsRejectsJunk) {
  EXPECT_EQ(rational_from_string("6/8"), Rational(3, 4));
  EXPECT_THROW(rational_from_string("1/0"), InputError);
  EXPECT_THROW(rational_from_string("abc"), InputError);
}

TEST(Subsets, Combinatorics) {
  EXPECT_EQ(binomial(12, 6), 924U);
  EXPECT_EQ(count_up_to(24, 2), 301U);
  EXPECT_EQ(subsets_up_to(4, 2).size(), 11U);
  EXPECT_EQ(intersection_size({1, 3, 5}, {3, 4, 5}), 2U);
  EXPECT_EQ(symmetric_difference({1, 2}, {2, 3}), (Subset{1, 3}));
  std::vector<Subset> seen;
  for_each_combination(4, 2, [&](const Subset& s) {
    seen.push_back(s);
    return true;
  });
  ASSERT_EQ(seen.size(), 6U);
  EXPECT_EQ(seen.front(), (Subset{1, 2}));
  EXPECT_EQ(seen.back(), (Subset{3, 4}));
}

}  // namespace
}  // namespace cardcsp
