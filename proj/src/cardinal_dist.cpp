#include "cardcsp/cardinal_dist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "cardcsp/errors.hpp"

namespace cardcsp {

std::vector<QuadScalar> delta_sequence(std::uint32_t n, const Rational& p, std::size_t kmax) {
  if (kmax > n) throw InputError("kmax exceeds n");
  const Rational minus = p * n;
  if (p <= 0 || p >= 1 || minus.get_den() != 1) {
    throw InputError("p must lie in (0,1) with p*n an integer");
  }
  const QuadScalar q = Basis::phi(p).q();
  std::vector<QuadScalar> delta{QuadScalar(1)};
  if (kmax >= 1) delta.emplace_back(0);
  // k delta_{k-1} + k q delta_k + (n-k) delta_{k+1} = 0
  for (std::size_t k = 1; k + 1 <= kmax; ++k) {
    const QuadScalar kk(static_cast<long>(k));
    QuadScalar next = kk * delta[k - 1] + kk * q * delta[k];
    next /= QuadScalar(-static_cast<long>(n - k));
    delta.push_back(std::move(next));
  }
  return delta;
}

CardinalDist::CardinalDist(std::uint32_t n, const Rational& p)
    : n_(n), p_(p), basis_(Basis::phi(p)), delta_(delta_sequence(n, p, n)) {
  p_.canonicalize();
  minus_ = static_cast<std::uint32_t>(Rational(p * n).get_num().get_ui());
}

const QuadScalar& CardinalDist::delta(std::size_t k) const {
  if (k >= delta_.size()) throw InputError("moment index exceeds n");
  return delta_[k];
}

QuadScalar CardinalDist::pair_moment(std::size_t s, std::size_t t, std::size_t common) const {
  const std::size_t sym = s + t - 2 * common;
  QuadScalar total;
  QuadScalar q_pow(1);
  for (std::size_t r = 0; r <= common; ++r) {
    if (r > 0) q_pow *= q();
    if (r > 0 && q().is_zero()) break;
    total += QuadScalar(binomial_exact(common, r)) * q_pow * delta(sym + r);
  }
  return total;
}

QuadScalar CardinalDist::pair_moment_simplified(std::size_t s, std::size_t t,
                                                std::size_t common) const {
  return delta(s + t - 2 * common);
}

MultilinearPoly to_dist_basis(const MultilinearPoly& f, const CardinalDist& dist) {
  if (f.n() != dist.n()) throw InputError("polynomial and distribution differ in n");
  if (f.basis().kind() == BasisKind::chi) return convert_basis(f, dist.basis());
  if (f.basis().bias() != dist.p()) throw InputError("polynomial basis uses a different p");
  return f;
}

QuadScalar expectation(const MultilinearPoly& f, const CardinalDist& dist) {
  const MultilinearPoly g = to_dist_basis(f, dist);
  QuadScalar total;
  for (const auto& [set, coeff] : g.terms()) total += coeff * dist.delta(set.size());
  return total;
}

QuadScalar second_moment(const MultilinearPoly& f, const CardinalDist& dist) {
  const MultilinearPoly g = to_dist_basis(f, dist);
  // Group coefficient products by (|S|, |T|, |S cap T|) so each pair moment is
  // formed once.
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, QuadScalar> buckets;
  const auto& terms = g.terms();
  for (auto it = terms.begin(); it != terms.end(); ++it) {
    const auto& [s, cs] = *it;
    buckets[{s.size(), s.size(), s.size()}] += cs * cs;
    for (auto jt = std::next(it); jt != terms.end(); ++jt) {
      const auto& [t, ct] = *jt;
      const std::size_t lo = std::min(s.size(), t.size());
      const std::size_t hi = std::max(s.size(), t.size());
      buckets[{lo, hi, intersection_size(s, t)}] += QuadScalar(2) * cs * ct;
    }
  }
  QuadScalar total;
  for (const auto& [key, weight] : buckets) {
    const auto& [s, t, c] = key;
    total += weight * dist.pair_moment(s, t, c);
  }
  return total;
}

QuadScalar variance(const MultilinearPoly& f, const CardinalDist& dist) {
  const QuadScalar mean = expectation(f, dist);
  return second_moment(f, dist) - mean * mean;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw InputError("empty sampling range");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw = 0;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

Assignment sample(const CardinalDist& dist, std::mt19937_64& rng) {
  std::vector<int> values(dist.n(), 1);
  std::fill(values.begin(), values.begin() + dist.minus_count(), -1);
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[uniform_below(rng, i)]);
  }
  return Assignment(std::move(values));
}

Assignment sample(const CardinalDist& dist, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample(dist, rng);
}

MonteCarloEstimate mc_moment(const MultilinearPoly& f, const CardinalDist& dist, int power,
                             std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw InputError("sample count must be positive");
  if (power != 1 && power != 2 && power != 4) throw InputError("power must be 1, 2 or 4");
  if (f.n() != dist.n()) throw InputError("polynomial and distribution differ in n");
  struct Term {
    std::vector<std::uint32_t> vars;
    double coeff;
  };
  std::vector<Term> terms;
  for (const auto& [set, coeff] : f.terms()) terms.push_back({set, coeff.to_double()});
  const double plus = f.basis().at(1).to_double();
  const double minus = f.basis().at(-1).to_double();

  std::mt19937_64 rng(seed);
  std::vector<double> values;
  values.reserve(samples);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const Assignment a = sample(dist, rng);
    double value = 0;
    for (const auto& term : terms) {
      double prod = term.coeff;
      for (auto v : term.vars) prod *= a[v] > 0 ? plus : minus;
      value += prod;
    }
    values.push_back(std::pow(value, power));
  }
  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(samples);
  double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  MonteCarloEstimate out;
  out.estimate = mean;
  if (samples > 1) {
    out.standard_error = std::sqrt(ss / static_cast<double>(samples - 1) / static_cast<double>(samples));
  }
  return out;
}

}  // namespace cardcsp
