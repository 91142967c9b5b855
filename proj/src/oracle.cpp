#include "cardcsp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include "cardcsp/cardinal_dist.hpp"
#include "cardcsp/errors.hpp"

namespace cardcsp {

namespace {

void check_cap(std::uint32_t n, std::uint32_t minus, const OracleOptions& options) {
  std::uint64_t count = 0;
  try {
    count = binomial(n, minus);
  } catch (const std::overflow_error&) {
    count = UINT64_MAX;
  }
  if (count > options.cap) {
    throw ResourceError("enumeration of " + std::to_string(count) +
                        " assignments exceeds the cap of " + std::to_string(options.cap));
  }
}

// Walks minus-sets whose largest element is `top` (colex order within).
void walk_block(std::uint32_t n, std::uint32_t minus, std::uint32_t top,
                const SliceVisitor& visit) {
  std::vector<int> values(n, 1);
  std::vector<std::uint32_t> changed;
  Assignment current;
  bool first = true;
  std::vector<std::uint32_t> prev;
  // Positions 1..top-1 choose minus-1, colex order: advance lowest movable.
  std::vector<std::uint32_t> idx(minus - 1);
  std::iota(idx.begin(), idx.end(), 1U);
  while (true) {
    std::vector<std::uint32_t> set = idx;
    set.push_back(top);
    if (first) {
      for (auto v : set) values[v - 1] = -1;
      current = Assignment(values);
      changed.resize(n);
      std::iota(changed.begin(), changed.end(), 1U);
      first = false;
    } else {
      changed.clear();
      std::set_symmetric_difference(prev.begin(), prev.end(), set.begin(), set.end(),
                                    std::back_inserter(changed));
      for (auto v : changed) current.set(v, current[v] > 0 ? -1 : 1);
    }
    visit(current, changed);
    prev = set;
    // Colex successor of idx within [1, top-1].
    std::size_t j = 0;
    while (j < idx.size() && idx[j] + 1 == (j + 1 < idx.size() ? idx[j + 1] : top)) ++j;
    if (j == idx.size()) return;
    ++idx[j];
    for (std::size_t i = 0; i < j; ++i) idx[i] = static_cast<std::uint32_t>(i + 1);
  }
}

// Runs fn(top) for each possible largest element, spread across threads.
void run_blocks(std::uint32_t n, std::uint32_t minus, unsigned threads,
                const std::function<void(std::uint32_t)>& fn) {
  std::vector<std::uint32_t> tops;
  for (std::uint32_t top = std::max<std::uint32_t>(minus, 1); top <= n; ++top) tops.push_back(top);
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(tops.size())));
  if (threads == 1) {
    for (auto top : tops) fn(top);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < tops.size(); i += threads) fn(tops[i]);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

void for_each_slice_assignment(std::uint32_t n, std::uint32_t minus, const SliceVisitor& visit) {
  if (minus > n) throw InputError("more -1 entries than variables");
  if (minus == 0) {
    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 1U);
    visit(Assignment(std::vector<int>(n, 1)), all);
    return;
  }
  for (std::uint32_t top = minus; top <= n; ++top) walk_block(n, minus, top, visit);
}

IncrementalEvaluator::IncrementalEvaluator(const MultilinearPoly& f)
    : f_(f), touching_(f.n() + 1) {
  for (const auto& [set, coeff] : f.terms()) {
    for (auto v : set) touching_[v].push_back(terms_.size());
    terms_.emplace_back(set, coeff);
  }
  current_.resize(terms_.size());
  stamp_.assign(terms_.size(), 0);
}

QuadScalar IncrementalEvaluator::term_value(std::size_t index, const Assignment& a) const {
  const auto& [set, coeff] = terms_[index];
  QuadScalar value = coeff;
  for (auto v : set) value *= f_.basis().at(a[v]);
  return value;
}

const QuadScalar& IncrementalEvaluator::update(const Assignment& a,
                                               const std::vector<std::uint32_t>& changed) {
  ++epoch_;
  if (epoch_ == 1) {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      current_[i] = term_value(i, a);
      total_ += current_[i];
    }
    return total_;
  }
  for (auto v : changed) {
    for (auto i : touching_[v]) {
      if (stamp_[i] == epoch_) continue;
      stamp_[i] = epoch_;
      total_ -= current_[i];
      current_[i] = term_value(i, a);
      total_ += current_[i];
    }
  }
  return total_;
}

BruteOptimum brute_opt(const CspInstance& instance, const GlobalCardinality& card,
                       const OracleOptions& options) {
  const std::uint32_t n = instance.n();
  if (card.n() != n) throw InputError("cardinality constraint and instance differ in n");
  check_cap(n, card.minus_count(), options);
  const MultilinearPoly f = to_polynomial(instance);
  std::mutex mutex;
  BruteOptimum best;
  bool have = false;
  Rational total;
  std::uint64_t visited = 0;
  auto consider = [&](std::uint64_t value, const Assignment& a) {
    if (!have || value > best.opt || (value == best.opt && a < best.argmax)) {
      best.opt = value;
      best.argmax = a;
      have = true;
    }
  };
  auto block = [&](std::uint32_t top) {
    IncrementalEvaluator eval(f);
    BruteOptimum local;
    bool local_have = false;
    Rational local_total;
    std::uint64_t local_count = 0;
    auto visit = [&](const Assignment& a, const std::vector<std::uint32_t>& changed) {
      const QuadScalar& value = eval.update(a, changed);
      const std::uint64_t count = value.rational_part().get_num().get_ui();
      local_total += count;
      ++local_count;
      if (!local_have || count > local.opt || (count == local.opt && a < local.argmax)) {
        local.opt = count;
        local.argmax = a;
        local_have = true;
      }
    };
    if (card.minus_count() == 0) {
      for_each_slice_assignment(n, 0, visit);
    } else {
      walk_block(n, card.minus_count(), top, visit);
    }
    std::lock_guard<std::mutex> lock(mutex);
    total += local_total;
    visited += local_count;
    if (local_have) consider(local.opt, local.argmax);
  };
  run_blocks(n, card.minus_count(), options.threads, block);
  best.average = total / Rational(static_cast<unsigned long>(visited));
  // The polynomial is only a stand-in for speed; confirm on the argmax.
  if (constraint_count(instance, best.argmax) != best.opt) {
    throw std::logic_error("oracle polynomial disagrees with direct constraint count");
  }
  return best;
}

SliceMoments brute_moments(const MultilinearPoly& f, const GlobalCardinality& card,
                           const OracleOptions& options) {
  if (card.n() != f.n()) throw InputError("cardinality constraint and polynomial differ in n");
  check_cap(f.n(), card.minus_count(), options);
  std::mutex mutex;
  SliceMoments sums;
  std::uint64_t visited = 0;
  auto block = [&](std::uint32_t top) {
    IncrementalEvaluator eval(f);
    SliceMoments local;
    std::uint64_t local_count = 0;
    auto visit = [&](const Assignment& a, const std::vector<std::uint32_t>& changed) {
      const QuadScalar& value = eval.update(a, changed);
      const QuadScalar sq = value * value;
      local.first += value;
      local.second += sq;
      local.fourth += sq * sq;
      ++local_count;
    };
    if (card.minus_count() == 0) {
      for_each_slice_assignment(f.n(), 0, visit);
    } else {
      walk_block(f.n(), card.minus_count(), top, visit);
    }
    std::lock_guard<std::mutex> lock(mutex);
    sums.first += local.first;
    sums.second += local.second;
    sums.fourth += local.fourth;
    visited += local_count;
  };
  run_blocks(f.n(), card.minus_count(), options.threads, block);
  const QuadScalar count(Rational(static_cast<unsigned long>(visited)));
  sums.first /= count;
  sums.second /= count;
  sums.fourth /= count;
  return sums;
}

QuadScalar brute_moment(const MultilinearPoly& f, const GlobalCardinality& card, int power,
                        const OracleOptions& options) {
  const SliceMoments m = brute_moments(f, card, options);
  switch (power) {
    case 1:
      return m.first;
    case 2:
      return m.second;
    case 4:
      return m.fourth;
    default:
      throw InputError("power must be 1, 2 or 4");
  }
}

QuadScalar product_measure_moment(const MultilinearPoly& f, const Rational& p, int power) {
  if (f.n() > 24) throw ResourceError("product-measure enumeration limited to n <= 24");
  QuadScalar total;
  const std::uint32_t n = f.n();
  std::vector<Rational> minus_pow{1};
  std::vector<Rational> plus_pow{1};
  for (std::uint32_t i = 1; i <= n; ++i) {
    minus_pow.push_back(minus_pow.back() * p);
    plus_pow.push_back(plus_pow.back() * (1 - p));
  }
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<int> values(n);
    std::uint32_t minus = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      values[i] = (mask >> i) & 1U ? -1 : 1;
      minus += values[i] < 0 ? 1 : 0;
    }
    const QuadScalar value = evaluate(f, Assignment(values));
    total += pow(value, static_cast<unsigned>(power)) *
             QuadScalar(minus_pow[minus] * plus_pow[n - minus]);
  }
  return total;
}

HyperRatio hyper_ratio(const MultilinearPoly& f, const GlobalCardinality& card,
                       const OracleOptions& options) {
  const SliceMoments m = brute_moments(f, card, options);
  if (m.second.is_zero()) throw DegenerateInput("second moment is zero");
  HyperRatio out;
  out.fourth_moment = m.fourth;
  out.second_moment = m.second;
  out.norm_sq = l2_norm_sq(f);
  out.over_second_moment_sq = (m.fourth / (m.second * m.second)).to_long_double();
  if (!out.norm_sq.is_zero()) {
    out.over_norm_sq = (m.fourth / (out.norm_sq * out.norm_sq)).to_long_double();
  }
  return out;
}

RestrictionGap restriction_gap(const MultilinearPoly& g, const GlobalCardinality& card,
                               std::uint32_t var, const OracleOptions& options) {
  if (card.n() != g.n()) throw InputError("cardinality constraint and polynomial differ in n");
  if (var == 0 || var > g.n()) throw InputError("variable index out of range");
  for (const auto& [set, coeff] : g.terms()) {
    if (contains(set, var)) throw InputError("polynomial depends on the conditioned variable");
  }
  check_cap(g.n(), card.minus_count(), options);
  QuadScalar plus_sum;
  QuadScalar minus_sum;
  std::uint64_t plus_count = 0;
  std::uint64_t minus_count = 0;
  IncrementalEvaluator eval(g);
  for_each_slice_assignment(g.n(), card.minus_count(),
                            [&](const Assignment& a, const std::vector<std::uint32_t>& changed) {
                              const QuadScalar& value = eval.update(a, changed);
                              if (a[var] > 0) {
                                plus_sum += value * value;
                                ++plus_count;
                              } else {
                                minus_sum += value * value;
                                ++minus_count;
                              }
                            });
  RestrictionGap out;
  if (plus_count > 0 && minus_count > 0) {
    out.gap = abs(plus_sum / QuadScalar(Rational(static_cast<unsigned long>(plus_count))) -
                  minus_sum / QuadScalar(Rational(static_cast<unsigned long>(minus_count))));
  }
  const long double d = static_cast<long double>(std::max<std::size_t>(g.degree(), 1));
  const long double p = to_long_double(card.p());
  const long double norm = l2_norm_sq(g).to_long_double();
  const long double root_n = std::sqrt(static_cast<long double>(g.n()));
  out.bound = 3.0L * d * std::sqrt(d) / (p * (1 - p)) * norm / root_n;
  if (norm > 0) out.scaled = out.gap.to_long_double() * root_n / norm;
  return out;
}

bool brute_force_decision(const CspInstance& instance, const GlobalCardinality& card,
                          const Rational& t, const OracleOptions& options) {
  const BruteOptimum best = brute_opt(instance, card, options);
  return Rational(static_cast<unsigned long>(best.opt)) >= best.average + t;
}

QuadScalar averaged_restricted_variance(const MultilinearPoly& f, const GlobalCardinality& card,
                                        const OracleOptions& options) {
  if (f.basis().kind() != BasisKind::chi) throw InputError("expects the chi basis");
  const std::uint32_t n = f.n();
  const int majority = card.plus_count() >= card.minus_count() ? 1 : -1;
  const std::uint32_t fixed =
      majority > 0 ? card.plus_count() - card.minus_count() : card.minus_count() - card.plus_count();
  const std::uint32_t rest = n - fixed;
  check_cap(n, fixed, options);
  QuadScalar total;
  std::uint64_t blocks = 0;
  for_each_combination(n, fixed, [&](const Subset& q_set) {
    PartialAssignment pinned;
    for (auto v : q_set) pinned[v] = majority;
    const MultilinearPoly restricted = restrict(f, pinned);
    const Subset free_vars = set_difference(
        [&] {
          Subset all(n);
          std::iota(all.begin(), all.end(), 1U);
          return all;
        }(),
        q_set);
    QuadScalar sum;
    QuadScalar sum_sq;
    std::uint64_t count = 0;
    for_each_combination(free_vars, rest / 2, [&](const Subset& minus_set) {
      std::vector<int> values(n, 1);
      for (auto v : q_set) values[v - 1] = majority;
      for (auto v : free_vars) values[v - 1] = 1;
      for (auto v : minus_set) values[v - 1] = -1;
      const QuadScalar value = evaluate(restricted, Assignment(values));
      sum += value;
      sum_sq += value * value;
      ++count;
      return true;
    });
    const QuadScalar c(Rational(static_cast<unsigned long>(count)));
    const QuadScalar mean = sum / c;
    total += sum_sq / c - mean * mean;
    ++blocks;
    return true;
  });
  return total / QuadScalar(Rational(static_cast<unsigned long>(blocks)));
}

}  // namespace cardcsp
