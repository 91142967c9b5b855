#include "cardcsp/rounding.hpp"

#include <algorithm>
#include <limits>
#include <thread>

#include "cardcsp/errors.hpp"

namespace cardcsp {

namespace {

// Colex ranks of k-subsets of [n] (elements 1-based), used to store the
// homogeneous parts densely.
class SubsetRanker {
 public:
  SubsetRanker(std::uint32_t n, std::size_t kmax) : table_(n + 1) {
    for (std::uint32_t m = 0; m <= n; ++m) {
      table_[m].resize(kmax + 2);
      for (std::size_t k = 0; k <= kmax + 1; ++k) table_[m][k] = binomial(m, k);
    }
  }
  std::uint64_t rank(const Subset& s) const {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < s.size(); ++i) r += table_[s[i] - 1][i + 1];
    return r;
  }
  // Rank of s with its idx-th element removed.
  std::uint64_t rank_without(const Subset& s, std::size_t idx) const {
    std::uint64_t r = 0;
    for (std::size_t i = 0, pos = 0; i < s.size(); ++i) {
      if (i == idx) continue;
      r += table_[s[i] - 1][pos + 1];
      ++pos;
    }
    return r;
  }

 private:
  std::vector<std::vector<std::uint64_t>> table_;
};

Rational rational_coefficient(const QuadScalar& value) {
  if (!value.is_rational()) throw InputError("expected rational chi-basis coefficients");
  return value.rational_part();
}

std::vector<Rational> dense_level(const MultilinearPoly& f, std::size_t l,
                                  const SubsetRanker& ranker) {
  std::vector<Rational> out(binomial(f.n(), l));
  for (const auto& [set, coeff] : f.terms()) {
    if (set.size() == l) out[ranker.rank(set)] = rational_coefficient(coeff);
  }
  return out;
}

// beta_i for i = 1..l-1: beta_1 = (l-2)!, beta_{i+1} = -i/(l-i-1) beta_i.
std::vector<Rational> beta_coefficients(std::size_t l) {
  std::vector<Rational> beta(l);
  if (l < 2) return beta;
  beta[1] = factorial(l - 2);
  for (std::size_t i = 1; i + 1 < l; ++i) {
    beta[i + 1] = -Rational(static_cast<long>(i), static_cast<long>(l - i - 1)) * beta[i];
  }
  return beta;
}

// Dense version of reconstruct_level: level holds the degree-l coefficients
// by rank, the result holds the degree-(l-1) coefficients by rank.
std::vector<Rational> reconstruct_dense(std::uint32_t n, const std::vector<Rational>& level,
                                        const Subset& s, const SubsetRanker& ranker) {
  const std::size_t l = s.size();
  if (l == 0) throw InputError("candidate set must be nonempty");
  if (n < 2 * l - 1) throw InputError("too few variables to reconstruct from this set");
  const std::vector<Rational> beta = beta_coefficients(l);
  const Rational l_factorial = factorial(l);
  const Rational sign = l % 2 == 1 ? Rational(1) : Rational(-1);  // (-1)^{l-1}
  std::vector<Rational> out(binomial(n, l - 1));

  for_each_combination(n, l - 1, [&](const Subset& s1) {
    // A set of l variables disjoint from s1 that, together with s1, spans
    // 2l-1 variables containing all of s.
    Subset other = set_difference(s, s1);
    for (std::uint32_t v = 1; other.size() < l; ++v) {
      if (!contains(s, v) && !contains(s1, v)) other.push_back(v);
    }
    std::sort(other.begin(), other.end());
    // sum over (l-1)-subsets s2 of other of the combined equations; each
    // i-subset of other lies in l-i of them.
    Rational combined;
    for (std::size_t i = 1; i < l; ++i) {
      Rational inner;
      for_each_combination(s1, l - i, [&](const Subset& t1) {
        for_each_combination(other, i, [&](const Subset& t2) {
          inner += level[ranker.rank(set_union(t1, t2))];
          return true;
        });
        return true;
      });
      combined += beta[i] * static_cast<long>(l - i) * inner;
    }
    // l (-1)^{l-1} h(s1) = f(other) - (-1)^l combined / (l-1)!
    const Rational value =
        (sign * factorial(l - 1) * level[ranker.rank(other)] + combined) / l_factorial;
    out[ranker.rank(s1)] = value;
    return true;
  });
  return out;
}

// Number of variables active in the degree-l part of F - (sum x_i) h, where
// h is homogeneous of degree l-1; stops early once it exceeds limit.
std::size_t active_count(std::uint32_t n, std::size_t l, const std::vector<Rational>& level,
                         const std::vector<Rational>* h, const SubsetRanker& ranker,
                         std::size_t limit) {
  std::vector<char> active(n + 1, 0);
  std::size_t count = 0;
  Rational value;
  for_each_combination(n, l, [&](const Subset& t) {
    value = level[ranker.rank(t)];
    if (h != nullptr) {
      for (std::size_t j = 0; j < t.size(); ++j) value -= (*h)[ranker.rank_without(t, j)];
    }
    if (value != 0) {
      for (auto v : t) {
        if (!active[v]) {
          active[v] = 1;
          ++count;
        }
      }
    }
    return count <= limit;
  });
  return count;
}

MultilinearPoly from_dense(std::uint32_t n, std::size_t l, const std::vector<Rational>& dense,
                           const SubsetRanker& ranker) {
  MultilinearPoly out(n, Basis::chi());
  for_each_combination(n, l, [&](const Subset& s) {
    const Rational& value = dense[ranker.rank(s)];
    if (value != 0) out.add_term(s, value);
    return true;
  });
  return out;
}

MultilinearPoly as_chi(const MultilinearPoly& f) {
  if (f.basis().kind() == BasisKind::chi) return f;
  return convert_basis(f, Basis::chi());
}

struct Candidate {
  std::size_t active = std::numeric_limits<std::size_t>::max();
  std::size_t index = std::numeric_limits<std::size_t>::max();
};

}  // namespace

Rational factorial_tower(std::size_t d) {
  Rational out = 1;
  for (std::size_t j = 2; j <= d; ++j) out *= factorial(j);
  return out;
}

Rational round_to_multiple(const Rational& value, const Rational& step) {
  if (step <= 0) throw InputError("rounding step must be positive");
  const Rational ratio = abs(value) / step;
  // floor(|ratio| + 1/2)
  const Rational shifted = ratio + Rational(1, 2);
  mpz_class whole;
  mpz_fdiv_q(whole.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  Rational out = Rational(whole) * step;
  return value < 0 ? Rational(-out) : out;
}

bool all_multiples_of(const MultilinearPoly& f, const Rational& step) {
  for (const auto& [set, coeff] : f.terms()) {
    if (!coeff.is_rational()) return false;
    const Rational ratio = coeff.rational_part() / step;
    if (ratio.get_den() != 1) return false;
  }
  return true;
}

MultilinearPoly shifted_sum_times(const MultilinearPoly& h, const Rational& shift) {
  const MultilinearPoly chi = as_chi(h);
  MultilinearPoly out = multiply(MultilinearPoly::variable_sum(chi.n(), Basis::chi()), chi);
  if (shift != 0) out -= chi * QuadScalar(shift);
  return out;
}

RoundingOutcome round_bisection(const MultilinearPoly& f_in, const MultilinearPoly& projected_h,
                                const Rational& gamma, const RoundingOptions& options) {
  const MultilinearPoly f = as_chi(f_in);
  const std::uint32_t n = f.n();
  const std::size_t d = f.degree();
  const QuadScalar constant = f.constant_term();
  if (!constant.is_rational()) throw InputError("expected rational chi-basis coefficients");

  MultilinearPoly h(n, Basis::chi());
  for (const auto& [set, coeff] : projected_h.terms()) {
    // At p = 1/2 the phi and chi coefficients coincide.
    h.add_term(set, coeff);
  }
  const MultilinearPoly sum = MultilinearPoly::variable_sum(n, Basis::chi());
  const MultilinearPoly centered = f - MultilinearPoly::constant(n, Basis::chi(), constant);
  const QuadScalar residual_sq = l2_norm_sq((centered - multiply(sum, h)).without_constant());

  if (options.enforce_preconditions) {
    if (!all_multiples_of(f, gamma)) {
      throw PreconditionError("coefficients are not multiples of gamma");
    }
    if (residual_sq * residual_sq > QuadScalar(static_cast<long>(n))) {
      throw PreconditionError("projection residual exceeds sqrt(n)");
    }
  }

  MultilinearPoly rounded(n, Basis::chi());
  Rational step = gamma;
  for (std::size_t level = d; level-- > 0;) {
    step /= factorial(level + 1);
    for (const auto& [set, coeff] : h.terms()) {
      if (set.size() != level) continue;
      const Rational value = round_to_multiple(rational_coefficient(coeff), step);
      if (value != 0) rounded.add_term(set, value);
    }
  }

  RoundingOutcome out{rounded, centered - multiply(sum, rounded), constant.rational_part(), {},
                      gamma / factorial_tower(d), std::nullopt};
  out.active_set = active_variables(out.reduced);
  if (!residual_sq.is_zero()) {
    out.norm_blowup = rational_coefficient(l2_norm_sq(out.reduced.without_constant()) /
                                           residual_sq);
  } else if (out.reduced.without_constant().is_zero()) {
    out.norm_blowup = Rational(1);
  }
  return out;
}

MultilinearPoly reconstruct_level(const MultilinearPoly& f_in, const Subset& s) {
  const MultilinearPoly f = as_chi(f_in);
  const std::size_t l = s.size();
  for (auto v : s) {
    if (v < 1 || v > f.n()) throw InputError("candidate set has an out-of-range variable");
  }
  const SubsetRanker ranker(f.n(), l);
  const auto level = dense_level(f, l, ranker);
  return from_dense(f.n(), l - 1, reconstruct_dense(f.n(), level, s, ranker), ranker);
}

MultilinearPoly reconstruct_h(const MultilinearPoly& f_in, const Subset& s,
                              const Rational& shift) {
  MultilinearPoly current = as_chi(f_in);
  const std::size_t d = s.size();
  MultilinearPoly h(current.n(), Basis::chi());
  for (std::size_t l = d; l >= 1; --l) {
    const Subset prefix(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(l));
    const MultilinearPoly part = reconstruct_level(current, prefix);
    h += part;
    current -= shifted_sum_times(part, shift);
  }
  return h;
}

RoundingOutcome round_global(const MultilinearPoly& f_in, const CardinalDist& dist,
                             const Rational& gamma, const RoundingOptions& options) {
  const MultilinearPoly f = as_chi(f_in);
  const std::uint32_t n = f.n();
  if (n != dist.n()) throw InputError("polynomial and distribution differ in n");
  const std::size_t d = f.degree();
  const Rational shift = Rational(static_cast<long>(n)) - 2 * Rational(dist.minus_count());

  if (options.enforce_preconditions) {
    if (!all_multiples_of(f, gamma)) {
      throw PreconditionError("coefficients are not multiples of gamma");
    }
    const QuadScalar var = variance(f, dist);
    if (var * var >= QuadScalar(static_cast<long>(n))) {
      throw PreconditionError("variance is not below sqrt(n)");
    }
  }

  MultilinearPoly current = f;
  MultilinearPoly h(n, Basis::chi());
  const SubsetRanker ranker(n, std::max<std::size_t>(d, 1));
  for (std::size_t l = d; l >= 1; --l) {
    const auto level = dense_level(current, l, ranker);
    const std::size_t zero_active = active_count(n, l, level, nullptr, ranker, n);
    if (zero_active == 0 || n < 2 * l - 1) continue;

    std::vector<Subset> candidates;
    for_each_combination(n, l, [&](const Subset& s) {
      candidates.push_back(s);
      return true;
    });
    const std::size_t workers = std::max<std::size_t>(1, std::min(options.threads,
                                                                  candidates.size()));
    std::vector<Candidate> best(workers);
    auto scan = [&](std::size_t worker) {
      Candidate local{zero_active, std::numeric_limits<std::size_t>::max()};
      for (std::size_t i = worker; i < candidates.size(); i += workers) {
        if (local.active == 0) break;
        const auto hs = reconstruct_dense(n, level, candidates[i], ranker);
        const std::size_t count = active_count(n, l, level, &hs, ranker, local.active);
        if (count < local.active) local = {count, i};
      }
      best[worker] = local;
    };
    if (workers == 1) {
      scan(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(scan, w);
      for (auto& t : pool) t.join();
    }
    Candidate chosen{zero_active, std::numeric_limits<std::size_t>::max()};
    for (const auto& c : best) {
      if (c.index == std::numeric_limits<std::size_t>::max()) continue;
      if (c.active < chosen.active || (c.active == chosen.active && c.index < chosen.index)) {
        chosen = c;
      }
    }
    if (chosen.index == std::numeric_limits<std::size_t>::max()) continue;
    const MultilinearPoly part = from_dense(
        n, l - 1, reconstruct_dense(n, level, candidates[chosen.index], ranker), ranker);
    h += part;
    current -= shifted_sum_times(part, shift);
  }

  RoundingOutcome out{h, current, 0, {}, gamma / factorial_tower(d), std::nullopt};
  out.active_set = active_variables(out.reduced);
  return out;
}

Rational blowup_bound(std::size_t d) {
  Rational out = 1;
  for (std::size_t i = 0; i < d; ++i) out *= 7;
  return out;
}

Rational global_kernel_bound(std::size_t d, const Rational& p, const Rational& variance,
                             const Rational& gamma) {
  const Rational small = std::min(p, Rational(1 - p));
  Rational bound = 20 * static_cast<long>(d * d) * blowup_bound(d);
  const Rational fact = factorial(d);
  for (std::size_t i = 0; i < 2 * d * d; ++i) bound *= fact;
  const Rational twice = 2 * small;
  for (std::size_t i = 0; i < 4 * d; ++i) bound /= twice;
  return bound * variance / (gamma * gamma);
}

}  // namespace cardcsp
