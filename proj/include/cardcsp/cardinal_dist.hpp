#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cardcsp/poly.hpp"

namespace cardcsp {

// Uniform distribution over assignments with exactly p n entries equal to -1.
class CardinalDist {
 public:
  CardinalDist(std::uint32_t n, const Rational& p);

  std::uint32_t n() const { return n_; }
  const Rational& p() const { return p_; }
  const Basis& basis() const { return basis_; }
  const QuadScalar& q() const { return basis_.q(); }
  std::uint32_t minus_count() const { return minus_; }

  // E[phi_S] for any |S| = k; defined for k <= n.
  const QuadScalar& delta(std::size_t k) const;
  const std::vector<QuadScalar>& deltas() const { return delta_; }

  // E[phi_S phi_T] for |S| = s, |T| = t, |S cap T| = common.
  QuadScalar pair_moment(std::size_t s, std::size_t t, std::size_t common) const;
  // delta_{|S xor T|}, which drops the phi_i^2 = q phi_i + 1 correction on
  // shared indices. Agrees with pair_moment when p = 1/2.
  QuadScalar pair_moment_simplified(std::size_t s, std::size_t t, std::size_t common) const;

 private:
  std::uint32_t n_;
  Rational p_;
  std::uint32_t minus_;
  Basis basis_;
  std::vector<QuadScalar> delta_;
};

std::vector<QuadScalar> delta_sequence(std::uint32_t n, const Rational& p, std::size_t kmax);

// Chi-basis inputs are converted to the distribution's phi basis first.
QuadScalar expectation(const MultilinearPoly& f, const CardinalDist& dist);
QuadScalar second_moment(const MultilinearPoly& f, const CardinalDist& dist);
QuadScalar variance(const MultilinearPoly& f, const CardinalDist& dist);

// Returns f in the phi basis of dist, checking that a phi-basis input uses
// the same bias.
MultilinearPoly to_dist_basis(const MultilinearPoly& f, const CardinalDist& dist);

// Integer uniform on [0, bound) by rejection, independent of the standard
// library's distribution implementations.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

Assignment sample(const CardinalDist& dist, std::mt19937_64& rng);
Assignment sample(const CardinalDist& dist, std::uint64_t seed);

struct MonteCarloEstimate {
  double estimate = 0;
  double standard_error = 0;
};

// Sample mean of f^power over `samples` draws, power in {1, 2, 4}.
MonteCarloEstimate mc_moment(const MultilinearPoly& f, const CardinalDist& dist, int power,
                             std::uint64_t samples, std::uint64_t seed);

}  // namespace cardcsp
