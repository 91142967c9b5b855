#pragma once

#include <cstdint>
#include <functional>

#include "cardcsp/csp.hpp"
#include "cardcsp/poly.hpp"

namespace cardcsp {

// Ground truth by exhaustive enumeration of every assignment satisfying the
// cardinality constraint.
struct OracleOptions {
  std::uint64_t cap = 10'000'000;
  unsigned threads = 1;
};

// Visits each assignment with exactly `minus` entries equal to -1, walking the
// positions of the -1 entries in colex order. The visitor also receives the
// variables whose value changed since the previous visit (all of them on the
// first call).
using SliceVisitor =
    std::function<void(const Assignment&, const std::vector<std::uint32_t>& changed)>;
void for_each_slice_assignment(std::uint32_t n, std::uint32_t minus, const SliceVisitor& visit);

// Keeps a polynomial's value current under single-variable updates.
class IncrementalEvaluator {
 public:
  explicit IncrementalEvaluator(const MultilinearPoly& f);
  // Re-evaluates the terms touching `changed` at the new assignment. The first
  // call must list every variable.
  const QuadScalar& update(const Assignment& a, const std::vector<std::uint32_t>& changed);
  const QuadScalar& value() const { return total_; }

 private:
  QuadScalar term_value(std::size_t index, const Assignment& a) const;

  const MultilinearPoly& f_;
  std::vector<std::pair<Subset, QuadScalar>> terms_;
  std::vector<std::vector<std::size_t>> touching_;
  std::vector<QuadScalar> current_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
  QuadScalar total_;
};

struct BruteOptimum {
  std::uint64_t opt = 0;
  Assignment argmax;  // lexicographically smallest, with -1 < +1
  Rational average;   // mean constraint count over the slice
};

BruteOptimum brute_opt(const CspInstance& instance, const GlobalCardinality& card,
                       const OracleOptions& options = {});

struct SliceMoments {
  QuadScalar first;
  QuadScalar second;
  QuadScalar fourth;
  QuadScalar variance() const { return second - first * first; }
};

SliceMoments brute_moments(const MultilinearPoly& f, const GlobalCardinality& card,
                           const OracleOptions& options = {});
QuadScalar brute_moment(const MultilinearPoly& f, const GlobalCardinality& card, int power,
                        const OracleOptions& options = {});

// Mean of f over the product measure where each x_i = -1 independently with
// probability p (the measure under which phi-basis coefficients are
// orthonormal).
QuadScalar product_measure_moment(const MultilinearPoly& f, const Rational& p, int power);

struct HyperRatio {
  QuadScalar fourth_moment;
  QuadScalar second_moment;
  QuadScalar norm_sq;
  long double over_second_moment_sq = 0;  // E[f^4] / E[f^2]^2
  long double over_norm_sq = 0;           // E[f^4] / ||f||^4
};

HyperRatio hyper_ratio(const MultilinearPoly& f, const GlobalCardinality& card,
                       const OracleOptions& options = {});

struct RestrictionGap {
  QuadScalar gap;           // |E[g^2 | x_i = +1] - E[g^2 | x_i = -1]|
  long double bound = 0;    // 3 d^{3/2} / (p(1-p)) * ||g||^2 / sqrt(n)
  long double scaled = 0;   // gap * sqrt(n) / ||g||^2
};

RestrictionGap restriction_gap(const MultilinearPoly& g, const GlobalCardinality& card,
                               std::uint32_t var, const OracleOptions& options = {});

bool brute_force_decision(const CspInstance& instance, const GlobalCardinality& card,
                          const Rational& t, const OracleOptions& options = {});

// Average over every way Q of fixing |1-2p| n variables to the majority value
// of the variance of f on the balanced assignments of the rest.
QuadScalar averaged_restricted_variance(const MultilinearPoly& f, const GlobalCardinality& card,
                                        const OracleOptions& options = {});

}  // namespace cardcsp
