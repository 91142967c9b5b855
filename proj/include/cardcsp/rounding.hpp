#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cardcsp/cardinal_dist.hpp"
#include "cardcsp/poly.hpp"

namespace cardcsp {

// Result of turning f into a slice-equivalent polynomial with few active
// variables: f(a) = reduced(a) + offset for every a on the slice.
struct RoundingOutcome {
  MultilinearPoly h{0};
  MultilinearPoly reduced{0};
  Rational offset;
  std::vector<std::uint32_t> active_set;
  // gamma / (d! (d-1)! ... 2!); every coefficient of h is a multiple of it.
  Rational granularity;
  // ||reduced||^2 / ||projection residual||^2 over non-constant terms. Set by
  // the bisection path when the residual is nonzero.
  std::optional<Rational> norm_blowup;
};

// d! (d-1)! ... 2!
Rational factorial_tower(std::size_t d);

// Nearest multiple of step, ties away from zero.
Rational round_to_multiple(const Rational& value, const Rational& step);

bool all_multiples_of(const MultilinearPoly& f, const Rational& step);

struct RoundingOptions {
  // Throw PreconditionError when the hypotheses of the rounding theorems
  // fail. The solver turns this off and records warnings instead, since the
  // reduced polynomial stays slice-equivalent either way.
  bool enforce_preconditions = true;
  std::size_t threads = 1;
};

// Bisection case. f is in the chi basis with coefficients that are multiples
// of gamma; projected_h is the null-space projection of f - f(empty). Rounds
// the coefficients of weight d-1 down to 0, level l to multiples of
// gamma / (d! (d-1)! ... (l+1)!).
RoundingOutcome round_bisection(const MultilinearPoly& f, const MultilinearPoly& projected_h,
                                const Rational& gamma, const RoundingOptions& options = {});

// Homogeneous degree l-1 polynomial h such that, if some h' makes every
// variable of the l-set s inactive in the degree-l part of f - (sum x_i) h',
// then h = h'. Only the degree-l part of f is read.
MultilinearPoly reconstruct_level(const MultilinearPoly& f, const Subset& s);

// Full candidate h of degree <= d-1 for the d-set s under the constraint
// sum x_i = shift, working level by level from degree d down to 1; level l
// uses the first l elements of s.
MultilinearPoly reconstruct_h(const MultilinearPoly& f, const Subset& s, const Rational& shift);

// General cardinality case: for each degree l = d..1, scans every l-subset
// (plus the zero candidate) and keeps the reconstruction that leaves the most
// variables inactive in the degree-l part, ties to the first in scan order.
RoundingOutcome round_global(const MultilinearPoly& f, const CardinalDist& dist,
                             const Rational& gamma, const RoundingOptions& options = {});

// Polynomial (sum x_i - shift) * h in the chi basis.
MultilinearPoly shifted_sum_times(const MultilinearPoly& h, const Rational& shift);

// 7^d, the bisection rounding blow-up bound.
Rational blowup_bound(std::size_t d);
// Active-variable bound of the global rounding:
// 20 d^2 7^d (d!)^{2 d^2} / (2 min(p, 1-p))^{4d} * variance / gamma^2.
Rational global_kernel_bound(std::size_t d, const Rational& p, const Rational& variance,
                             const Rational& gamma);

}  // namespace cardcsp
