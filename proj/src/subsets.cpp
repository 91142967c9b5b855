#include "cardcsp/subsets.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <stdexcept>

namespace cardcsp {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > UINT64_MAX) throw std::overflow_error("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(result);
}

Rational binomial_exact(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return Rational(out);
}

Rational factorial(std::uint64_t n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return Rational(out);
}

std::uint64_t count_up_to(std::uint64_t n, std::uint64_t k) {
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i <= std::min(n, k); ++i) total += binomial(n, i);
  return total;
}

std::size_t intersection_size(const Subset& lhs, const Subset& rhs) {
  std::size_t count = 0;
  auto i = lhs.begin();
  auto j = rhs.begin();
  while (i != lhs.end() && j != rhs.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

Subset symmetric_difference(const Subset& lhs, const Subset& rhs) {
  Subset out;
  std::set_symmetric_difference(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
                                std::back_inserter(out));
  return out;
}

Subset set_union(const Subset& lhs, const Subset& rhs) {
  Subset out;
  std::set_union(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(out));
  return out;
}

Subset set_difference(const Subset& lhs, const Subset& rhs) {
  Subset out;
  std::set_difference(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(out));
  return out;
}

bool contains(const Subset& set, std::uint32_t element) {
  return std::binary_search(set.begin(), set.end(), element);
}

void for_each_combination(const Subset& pool, std::size_t k,
                          const std::function<bool(const Subset&)>& visit) {
  const std::size_t n = pool.size();
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  Subset current(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) current[i] = pool[idx[i]];
    if (!visit(current)) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void for_each_combination(std::uint32_t n, std::size_t k,
                          const std::function<bool(const Subset&)>& visit) {
  Subset pool(n);
  std::iota(pool.begin(), pool.end(), 1U);
  for_each_combination(pool, k, visit);
}

std::vector<Subset> subsets_up_to(std::uint32_t n, std::size_t k) {
  std::vector<Subset> out;
  for (std::size_t size = 0; size <= std::min<std::size_t>(k, n); ++size) {
    for_each_combination(n, size, [&](const Subset& s) {
      out.push_back(s);
      return true;
    });
  }
  return out;
}

std::vector<Subset> all_subsets(const Subset& set) {
  std::vector<Subset> out;
  for (std::size_t size = 0; size <= set.size(); ++size) {
    for_each_combination(set, size, [&](const Subset& s) {
      out.push_back(s);
      return true;
    });
  }
  return out;
}

}  // namespace cardcsp
