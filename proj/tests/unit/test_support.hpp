#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cardcsp/csp.hpp"
#include "cardcsp/poly.hpp"

namespace cardcsp::testing {

// Random polynomial with `terms` monomials of degree <= max_degree and small
// rational coefficients (numerators in [-6, 6], denominators in {1, 2, 4}).
MultilinearPoly random_poly(std::mt19937_64& rng, std::uint32_t n, std::size_t max_degree,
                            std::size_t terms, const Basis& basis = Basis::chi());

// Random chi-basis polynomial on the given variables whose coefficients are
// nonzero multiples of step in [-range, range] * step.
MultilinearPoly lattice_poly(std::mt19937_64& rng, std::uint32_t n, const Subset& vars,
                             std::size_t max_degree, std::size_t terms, const Rational& step,
                             long range);

// Every subset of size <= max_degree gets a random coefficient.
MultilinearPoly dense_random_poly(std::mt19937_64& rng, std::uint32_t n, std::size_t max_degree,
                                  const Basis& basis = Basis::chi());

// m constraints of arity in [1, d] with random nonempty predicates.
CspInstance random_instance(std::mt19937_64& rng, std::uint32_t n, std::uint32_t d,
                            std::size_t m);

CspInstance complete_graph(std::uint32_t n);
CspInstance star_graph(std::uint32_t n);
CspInstance path_graph(std::uint32_t n);
CspInstance cycle_graph(std::uint32_t n);

std::vector<Assignment> all_assignments(std::uint32_t n);

std::string data_path(const std::string& name);

}  // namespace cardcsp::testing
