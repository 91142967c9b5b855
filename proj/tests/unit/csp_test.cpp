#include <gtest/gtest.h>

#include "cardcsp/csp.hpp"
#include "cardcsp/errors.hpp"
#include "test_support.hpp"

namespace cardcsp {
namespace {

using testing::all_assignments;
using testing::data_path;

TEST(ParseInstance, SingleEdge) {
  const auto parsed = read_instance_file(data_path("edge.csp"));
  ASSERT_EQ(parsed.instance.size(), 1U);
  const auto& c = parsed.instance.constraints().front();
  EXPECT_EQ(c.vars, (std::vector<std::uint32_t>{1, 2}));
  EXPECT_EQ(c.patterns, (std::vector<std::vector<int>>{{-1, 1}, {1, -1}}));
  EXPECT_EQ(parsed.cardinality.minus_count(), 1U);
}

TEST(ParseInstance, CompleteGraphOnFour) {
  const auto parsed = read_instance_file(data_path("k4.csp"));
  EXPECT_EQ(parsed.instance.size(), 6U);
  EXPECT_EQ(parsed.cardinality.p(), Rational(1, 2));
}

TEST(ParseInstance, HalfIntegerMinusCountRejected) {
  try {
    read_instance_file(data_path("bad_half_integer.csp"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1U);
  }
}

TEST(ParseInstance, PatternArityMismatchReportsLine) {
  try {
    read_instance_file(data_path("bad_pattern.csp"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3U);
  }
}

TEST(ParseInstance, DuplicateVariableRejected) {
  EXPECT_THROW(parse_instance("csp 3 1 2 1/3\nc 2 1 1\ns 1 1\n"), ParseError);
}

TEST(ParseInstance, ConstraintCountMustMatchHeader) {
  EXPECT_THROW(parse_instance("csp 2 2 2 1/2\nc 2 1 2\ns 1 -1\n"), ParseError);
}

TEST(ParseInstance, MalformedHeader) {
  EXPECT_THROW(parse_instance("csp 4 0 2\n"), ParseError);
  EXPECT_THROW(parse_instance("cps 4 0 2 1/2\n"), ParseError);
  EXPECT_THROW(parse_instance(""), ParseError);
}

TEST(ParseInstance, FormatRoundTrip) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = testing::random_instance(rng, 9, 3, 7);
    const GlobalCardinality card(9, Rational(1, 3));
    const auto parsed = parse_instance(format_instance(inst, card));
    EXPECT_EQ(format_instance(parsed.instance, parsed.cardinality), format_instance(inst, card));
  }
}

TEST(ToPolynomial, CutEdge) {
  CspInstance inst(2, 2);
  inst.add_constraint(cut_constraint(1, 2));
  MultilinearPoly expected = MultilinearPoly::constant(2, Basis::chi(), Rational(1, 2));
  expected.add_term({1, 2}, Rational(-1, 2));
  EXPECT_EQ(to_polynomial(inst), expected);
}

TEST(ToPolynomial, StarSimplifies) {
  const std::uint32_t n = 6;
  const auto f = to_polynomial(testing::star_graph(n));
  MultilinearPoly expected = MultilinearPoly::constant(n, Basis::chi(), Rational(n, 2));
  expected -= multiply(MultilinearPoly::variable_sum(n, Basis::chi()),
                       MultilinearPoly::monomial(n, Basis::chi(), {1}, Rational(1, 2)));
  EXPECT_EQ(f, expected);
}

TEST(ToPolynomial, AgreesWithDirectCountExhaustively) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const std::uint32_t n = trial < 5 ? 8 : 10;
    const auto inst = testing::random_instance(rng, n, 3, 10);
    const auto f = to_polynomial(inst);
    EXPECT_LE(f.degree(), 3U);
    for (const auto& [set, coeff] : f.terms()) {
      // multiples of 2^{-3}
      EXPECT_EQ(Rational(coeff.rational_part() * 8).get_den(), 1);
      EXPECT_TRUE(coeff.is_rational());
    }
    for (const Assignment& a : all_assignments(n)) {
      EXPECT_EQ(evaluate(f, a), QuadScalar(Rational(constraint_count(inst, a))));
    }
  }
}

TEST(ConstraintCount, Examples) {
  CspInstance edge(2, 2);
  edge.add_constraint(cut_constraint(1, 2));
  EXPECT_EQ(constraint_count(edge, Assignment({1, -1})), 1U);
  EXPECT_EQ(constraint_count(testing::complete_graph(4), Assignment({1, 1, -1, -1})), 4U);
  EXPECT_EQ(constraint_count(CspInstance(3, 2), Assignment({1, 1, -1})), 0U);
}

TEST(ConstraintCount, DuplicateConstraintsCountTwice) {
  CspInstance inst(2, 2);
  inst.add_constraint(cut_constraint(1, 2));
  inst.add_constraint(cut_constraint(1, 2));
  EXPECT_EQ(constraint_count(inst, Assignment({1, -1})), 2U);
}

TEST(GlobalCardinalityTest, Counts) {
  const GlobalCardinality card(6, Rational(1, 3));
  EXPECT_EQ(card.minus_count(), 2U);
  EXPECT_EQ(card.plus_count(), 4U);
  EXPECT_EQ(card.target_sum(), 2);
  EXPECT_THROW(GlobalCardinality(5, Rational(1, 2)), InputError);
  EXPECT_THROW(GlobalCardinality(4, Rational(0)), InputError);
}

}  // namespace
}  // namespace cardcsp
