#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cardcsp/scalar.hpp"

namespace cardcsp {

// Sorted, duplicate-free list of 1-indexed variables.
using Subset = std::vector<std::uint32_t>;

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);
Rational binomial_exact(std::uint64_t n, std::uint64_t k);
Rational factorial(std::uint64_t n);

// Number of subsets of [n] with at most k elements.
std::uint64_t count_up_to(std::uint64_t n, std::uint64_t k);

std::size_t intersection_size(const Subset& lhs, const Subset& rhs);
Subset symmetric_difference(const Subset& lhs, const Subset& rhs);
Subset set_union(const Subset& lhs, const Subset& rhs);
Subset set_difference(const Subset& lhs, const Subset& rhs);
bool contains(const Subset& set, std::uint32_t element);

// Visits every k-subset of the given pool (which must be sorted) in
// lexicographic order. Returning false from the visitor stops the walk.
void for_each_combination(const Subset& pool, std::size_t k,
                          const std::function<bool(const Subset&)>& visit);

// Shorthand for the pool {1, ..., n}.
void for_each_combination(std::uint32_t n, std::size_t k,
                          const std::function<bool(const Subset&)>& visit);

// All subsets of [n] of size <= k, ordered by size, then lexicographically.
std::vector<Subset> subsets_up_to(std::uint32_t n, std::size_t k);

// All subsets of the given set, ordered by size, then lexicographically.
std::vector<Subset> all_subsets(const Subset& set);

}  // namespace cardcsp
