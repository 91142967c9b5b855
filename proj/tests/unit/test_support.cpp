#include "test_support.hpp"

#include <algorithm>
#include <set>

#include "cardcsp/cardinal_dist.hpp"

namespace cardcsp::testing {

namespace {

Rational random_coefficient(std::mt19937_64& rng) {
  long num = 0;
  while (num == 0) num = static_cast<long>(uniform_below(rng, 13)) - 6;
  static const long dens[] = {1, 2, 4};
  return Rational(num, dens[uniform_below(rng, 3)]);
}

Subset random_subset(std::mt19937_64& rng, std::uint32_t n, std::size_t size) {
  std::set<std::uint32_t> chosen;
  while (chosen.size() < size) chosen.insert(static_cast<std::uint32_t>(uniform_below(rng, n)) + 1);
  return {chosen.begin(), chosen.end()};
}

}  // namespace

MultilinearPoly random_poly(std::mt19937_64& rng, std::uint32_t n, std::size_t max_degree,
                            std::size_t terms, const Basis& basis) {
  MultilinearPoly f(n, basis);
  max_degree = std::min<std::size_t>(max_degree, n);
  for (std::size_t i = 0; i < terms; ++i) {
    const std::size_t size = uniform_below(rng, max_degree + 1);
    f.add_term(random_subset(rng, n, size), QuadScalar(random_coefficient(rng)));
  }
  return f;
}

MultilinearPoly lattice_poly(std::mt19937_64& rng, std::uint32_t n, const Subset& vars,
                             std::size_t max_degree, std::size_t terms, const Rational& step,
                             long range) {
  MultilinearPoly f(n, Basis::chi());
  max_degree = std::min<std::size_t>(max_degree, vars.size());
  for (std::size_t i = 0; i < terms; ++i) {
    const std::size_t size = uniform_below(rng, max_degree + 1);
    Subset picked;
    for (auto index : random_subset(rng, static_cast<std::uint32_t>(vars.size()), size)) {
      picked.push_back(vars[index - 1]);
    }
    long k = 0;
    while (k == 0) k = static_cast<long>(uniform_below(rng, 2 * range + 1)) - range;
    f.add_term(picked, QuadScalar(step * k));
  }
  return f;
}

MultilinearPoly dense_random_poly(std::mt19937_64& rng, std::uint32_t n, std::size_t max_degree,
                                  const Basis& basis) {
  MultilinearPoly f(n, basis);
  for (const Subset& s : subsets_up_to(n, max_degree)) {
    f.add_term(s, QuadScalar(random_coefficient(rng)));
  }
  return f;
}

CspInstance random_instance(std::mt19937_64& rng, std::uint32_t n, std::uint32_t d,
                            std::size_t m) {
  CspInstance inst(n, d);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t arity = 1 + uniform_below(rng, std::min<std::uint32_t>(d, n));
    Subset vars = random_subset(rng, n, arity);
    std::shuffle(vars.begin(), vars.end(), rng);
    Constraint c;
    c.vars.assign(vars.begin(), vars.end());
    const std::uint32_t patterns = 1U << arity;
    while (c.patterns.empty()) {
      for (std::uint32_t mask = 0; mask < patterns; ++mask) {
        if (uniform_below(rng, 2) == 0) continue;
        std::vector<int> pattern(arity);
        for (std::size_t j = 0; j < arity; ++j) pattern[j] = (mask >> j) & 1U ? 1 : -1;
        c.patterns.push_back(pattern);
      }
    }
    inst.add_constraint(std::move(c));
  }
  return inst;
}

CspInstance complete_graph(std::uint32_t n) {
  CspInstance inst(n, 2);
  for (std::uint32_t u = 1; u <= n; ++u) {
    for (std::uint32_t v = u + 1; v <= n; ++v) inst.add_constraint(cut_constraint(u, v));
  }
  return inst;
}

CspInstance star_graph(std::uint32_t n) {
  CspInstance inst(n, 2);
  for (std::uint32_t v = 2; v <= n; ++v) inst.add_constraint(cut_constraint(1, v));
  return inst;
}

CspInstance path_graph(std::uint32_t n) {
  CspInstance inst(n, 2);
  for (std::uint32_t v = 1; v < n; ++v) inst.add_constraint(cut_constraint(v, v + 1));
  return inst;
}

CspInstance cycle_graph(std::uint32_t n) {
  CspInstance inst = path_graph(n);
  inst.add_constraint(cut_constraint(n, 1));
  return inst;
}

std::vector<Assignment> all_assignments(std::uint32_t n) {
  std::vector<Assignment> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<int> values(n);
    for (std::uint32_t i = 0; i < n; ++i) values[i] = (mask >> i) & 1U ? -1 : 1;
    out.emplace_back(values);
  }
  return out;
}

std::string data_path(const std::string& name) { return std::string(CARDCSP_TEST_DATA) + "/" + name; }

}  // namespace cardcsp::testing
