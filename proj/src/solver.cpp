#include "cardcsp/solver.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "cardcsp/spectra.hpp"

namespace cardcsp {
namespace {

std::string trim(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return text.substr(begin, end - begin);
}

std::uint64_t parse_count(std::size_t line, const std::string& value) {
  if (value.empty() || !std::all_of(value.begin(), value.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
      })) {
    throw ParseError(line, "expected a non-negative integer, got '" + value + "'");
  }
  try {
    return std::stoull(value);
  } catch (const std::out_of_range&) {
    throw ParseError(line, "integer out of range: " + value);
  }
}

Rational parse_rational(std::size_t line, const std::string& value) {
  try {
    return rational_from_string(value);
  } catch (const Error&) {
    throw ParseError(line, "expected a rational, got '" + value + "'");
  }
}

Rational power(const Rational& base, std::size_t exponent) {
  Rational out = 1;
  for (std::size_t i = 0; i < exponent; ++i) out *= base;
  return out;
}

Rational to_rational(const QuadScalar& value, const char* what) {
  if (!value.is_rational()) throw NumericalError(std::string(what) + " is not rational");
  return value.rational_part();
}

// Integer image of a rational polynomial: every coefficient times a common
// denominator, checked to fit the search arithmetic.
struct ScaledTerm {
  std::vector<std::size_t> positions;  // indices into the kernel
  std::int64_t coeff;
};

struct ScaledPoly {
  std::int64_t constant = 0;
  std::vector<ScaledTerm> terms;
  mpz_class scale = 1;
};

ScaledPoly scale_to_integers(const MultilinearPoly& reduced,
                             const std::vector<std::uint32_t>& kernel) {
  ScaledPoly out;
  for (const auto& [set, coeff] : reduced.terms()) {
    const Rational value = to_rational(coeff, "reduced coefficient");
    mpz_lcm(out.scale.get_mpz_t(), out.scale.get_mpz_t(), value.get_den_mpz_t());
  }
  mpz_class budget = 0;
  const mpz_class limit = mpz_class(1) << 62;
  for (const auto& [set, coeff] : reduced.terms()) {
    const Rational value = coeff.rational_part();
    const mpz_class scaled = value.get_num() * (out.scale / value.get_den());
    budget += abs(scaled);
    if (budget >= limit) throw ResourceError("reduced coefficients overflow 62-bit search");
    const auto as_int = static_cast<std::int64_t>(scaled.get_si());
    if (set.empty()) {
      out.constant = as_int;
      continue;
    }
    ScaledTerm term{{}, as_int};
    for (std::uint32_t var : set) {
      const auto it = std::lower_bound(kernel.begin(), kernel.end(), var);
      if (it == kernel.end() || *it != var) {
        throw InputError("reduced polynomial depends on variable " + std::to_string(var) +
                         " outside the kernel");
      }
      term.positions.push_back(static_cast<std::size_t>(it - kernel.begin()));
    }
    out.terms.push_back(std::move(term));
  }
  return out;
}

struct SearchResult {
  bool found = false;
  std::int64_t value = 0;
  std::vector<int> values;
};

// Depth-first branch and bound over the kernel in order, -1 before +1. Ties
// keep the first leaf reached, which is the lexicographically smallest.
class KernelSearch {
 public:
  KernelSearch(const ScaledPoly& poly, std::size_t k, std::uint32_t minus_cap,
               std::uint32_t plus_cap)
      : poly_(poly), minus_cap_(minus_cap), plus_cap_(plus_cap), var_terms_(k),
        values_(k, 0) {
    remaining_.reserve(poly.terms.size());
    sign_.assign(poly.terms.size(), 1);
    fixed_ = poly.constant;
    for (std::size_t i = 0; i < poly.terms.size(); ++i) {
      remaining_.push_back(poly.terms[i].positions.size());
      open_ += std::abs(poly.terms[i].coeff);
      for (std::size_t pos : poly.terms[i].positions) var_terms_[pos].push_back(i);
    }
  }

  bool assign(std::size_t pos, int value) {
    if (value < 0 ? minus_used_ >= minus_cap_ : plus_used_ >= plus_cap_) return false;
    (value < 0 ? minus_used_ : plus_used_) += 1;
    values_[pos] = value;
    for (std::size_t i : var_terms_[pos]) {
      sign_[i] *= value;
      if (--remaining_[i] == 0) {
        fixed_ += sign_[i] * poly_.terms[i].coeff;
        open_ -= std::abs(poly_.terms[i].coeff);
      }
    }
    return true;
  }

  void unassign(std::size_t pos) {
    const int value = values_[pos];
    for (std::size_t i : var_terms_[pos]) {
      if (remaining_[i]++ == 0) {
        fixed_ -= sign_[i] * poly_.terms[i].coeff;
        open_ += std::abs(poly_.terms[i].coeff);
      }
      sign_[i] *= value;
    }
    (value < 0 ? minus_used_ : plus_used_) -= 1;
    values_[pos] = 0;
  }

  void run(std::size_t pos, SearchResult& best) {
    if (best.found && fixed_ + open_ <= best.value) return;
    if (pos == values_.size()) {
      best.found = true;
      best.value = fixed_;
      best.values = values_;
      return;
    }
    for (int value : {-1, 1}) {
      if (!assign(pos, value)) continue;
      run(pos + 1, best);
      unassign(pos);
    }
  }

 private:
  const ScaledPoly& poly_;
  std::uint32_t minus_cap_;
  std::uint32_t plus_cap_;
  std::vector<std::vector<std::size_t>> var_terms_;
  std::vector<std::size_t> remaining_;
  std::vector<int> sign_;
  std::vector<int> values_;
  std::int64_t fixed_ = 0;
  std::int64_t open_ = 0;
  std::uint32_t minus_used_ = 0;
  std::uint32_t plus_used_ = 0;
};

SearchResult search_from_prefix(const ScaledPoly& poly, std::size_t k, std::uint32_t minus_cap,
                                std::uint32_t plus_cap, std::size_t prefix_len,
                                std::uint64_t prefix_bits) {
  KernelSearch search(poly, k, minus_cap, plus_cap);
  SearchResult best;
  for (std::size_t pos = 0; pos < prefix_len; ++pos) {
    const int value = ((prefix_bits >> (prefix_len - 1 - pos)) & 1U) != 0 ? 1 : -1;
    if (!search.assign(pos, value)) return best;
  }
  search.run(prefix_len, best);
  return best;
}

void note(Verdict& verdict, std::string message) { verdict.warnings.push_back(std::move(message)); }
void note(KernelReport& report, std::string message) { report.warnings.push_back(std::move(message)); }

}  // namespace

SolverConfig parse_config(const std::string& text) {
  SolverConfig config;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string content = trim(raw.substr(0, raw.find('#')));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key = value");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key == "enum_cap") {
      config.enum_cap = parse_count(line, value);
    } else if (key == "dense_cap") {
      config.dense_cap = parse_count(line, value);
    } else if (key == "kernel_cap") {
      config.kernel_cap = parse_count(line, value);
    } else if (key == "rational_cap") {
      config.rational_cap = parse_count(line, value);
    } else if (key == "threads") {
      config.threads = std::max<std::size_t>(1, parse_count(line, value));
    } else if (key == "float_tol") {
      char* end = nullptr;
      config.float_tol = std::strtod(value.c_str(), &end);
      if (value.empty() || *end != '\0' || !(config.float_tol > 0)) {
        throw ParseError(line, "expected a positive number, got '" + value + "'");
      }
    } else if (key == "p0") {
      config.p0 = parse_rational(line, value);
      if (config.p0 <= 0 || config.p0 > Rational(1, 2)) throw ParseError(line, "p0 must lie in (0, 1/2]");
    } else if (key == "gamma") {
      config.gamma = parse_rational(line, value);
      if (*config.gamma <= 0) throw ParseError(line, "gamma must be positive");
    } else {
      throw ParseError(line, "unknown key '" + key + "'");
    }
  }
  return config;
}

SolverConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

const char* to_string(Answer answer) {
  switch (answer) {
    case Answer::certified_above:
      return "CertifiedAbove";
    case Answer::solved_exactly:
      return "SolvedExactly";
    case Answer::trivial:
      return "Trivial";
  }
  return "?";
}

const char* to_string(Branch branch) {
  switch (branch) {
    case Branch::trivial:
      return "trivial";
    case Branch::large_variance:
      return "large_variance";
    case Branch::small_variance:
      return "small_variance";
  }
  return "?";
}

Rational average(const CspInstance& instance, const GlobalCardinality& card) {
  const CardinalDist dist(card.n(), card.p());
  return to_rational(expectation(to_polynomial(instance), dist), "average");
}

QuadScalar fourth_moment_constant(std::size_t d, const Rational& p_in) {
  Rational p = p_in;
  p.canonicalize();
  if (p == Rational(1, 2)) return Rational(12 * static_cast<long>(d) * power(81, d));
  const Rational ratio = (1 - p) / p;
  const Rational skew = ratio * ratio + 1 / (ratio * ratio);
  const Rational base = 12 * static_cast<long>(d) * power(256 * skew * skew, d);
  // d^{3/2} = d sqrt(d)
  return QuadScalar(base) * QuadScalar::sqrt_of(Rational(static_cast<long>(d)));
}

QuadScalar certification_threshold(std::size_t d, const Rational& p, const Rational& t) {
  return QuadScalar(Rational(4 * t * t)) * fourth_moment_constant(d, p);
}

Rational bisection_kernel_bound(std::size_t d, const Rational& variance, const Rational& gamma) {
  const Rational granularity = gamma / factorial_tower(d);
  return 2 * static_cast<long>(d) * blowup_bound(d) * variance / (granularity * granularity);
}

KernelOptimum enumerate_kernel(const MultilinearPoly& reduced,
                               const std::vector<std::uint32_t>& kernel,
                               const GlobalCardinality& card, const Rational& offset,
                               const SolverConfig& config) {
  if (reduced.basis().kind() != BasisKind::chi) throw InputError("enumeration needs the chi basis");
  if (reduced.n() != card.n()) throw InputError("polynomial and cardinality disagree on n");
  if (!std::is_sorted(kernel.begin(), kernel.end()) ||
      std::adjacent_find(kernel.begin(), kernel.end()) != kernel.end()) {
    throw InputError("kernel must be strictly increasing");
  }
  if (!kernel.empty() && (kernel.front() < 1 || kernel.back() > card.n())) {
    throw InputError("kernel variable out of range");
  }
  if (kernel.size() > config.kernel_cap) {
    throw KernelTooLarge("kernel of " + std::to_string(kernel.size()) +
                             " variables exceeds kernel_cap " + std::to_string(config.kernel_cap),
                         kernel);
  }
  const ScaledPoly poly = scale_to_integers(reduced, kernel);
  const std::size_t k = kernel.size();
  const std::uint32_t minus_cap = card.minus_count();
  const std::uint32_t plus_cap = card.plus_count();

  const std::size_t threads = std::max<std::size_t>(1, config.threads);
  std::size_t prefix_len = 0;
  if (threads > 1) {
    while ((std::size_t{1} << prefix_len) < 4 * threads && prefix_len < std::min<std::size_t>(k, 20)) {
      ++prefix_len;
    }
  }
  const std::uint64_t prefixes = std::uint64_t{1} << prefix_len;
  std::vector<SearchResult> results(prefixes);
  if (threads > 1 && prefixes > 1) {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t b = w; b < prefixes; b += threads) {
          results[b] = search_from_prefix(poly, k, minus_cap, plus_cap, prefix_len, b);
        }
      });
    }
    for (auto& worker : pool) worker.join();
  } else {
    results[0] = search_from_prefix(poly, k, minus_cap, plus_cap, 0, 0);
  }
  // Prefixes are in lexicographic order, so the first maximum is the
  // lexicographically smallest optimum.
  const SearchResult* best = nullptr;
  for (const auto& result : results) {
    if (result.found && (best == nullptr || result.value > best->value)) best = &result;
  }
  if (best == nullptr) throw InfeasibleError("no kernel assignment fits the cardinality");

  KernelOptimum out;
  out.opt = Rational(static_cast<long>(best->value)) / Rational(poly.scale) + offset;
  out.opt.canonicalize();
  out.kernel_values = best->values;
  std::vector<int> values(card.n(), -1);
  std::uint32_t plus_left = plus_cap;
  for (std::size_t i = 0; i < k; ++i) {
    values[kernel[i] - 1] = best->values[i];
    if (best->values[i] > 0) --plus_left;
  }
  std::size_t next = 0;
  for (std::uint32_t var = 1; var <= card.n() && plus_left > 0; ++var) {
    while (next < k && kernel[next] < var) ++next;
    if (next < k && kernel[next] == var) continue;
    values[var - 1] = 1;
    --plus_left;
  }
  out.witness = Assignment(std::move(values));
  return out;
}

KernelReport extract_kernel(const MultilinearPoly& f, const GlobalCardinality& card,
                            const SolverConfig& config) {
  if (f.n() != card.n()) throw InputError("polynomial and cardinality disagree on n");
  if (f.basis().kind() != BasisKind::chi) throw InputError("kernel extraction needs the chi basis");
  const Rational& p = card.p();
  const CardinalDist dist(card.n(), p);
  const std::size_t d = std::max<std::size_t>(1, f.degree());
  const Rational variance = to_rational(cardcsp::variance(f, dist), "variance");
  KernelReport report;
  const Rational n = static_cast<long>(card.n());
  const Rational gamma =
      config.gamma.value_or(Rational(1) / Rational(mpz_class(1) << static_cast<unsigned>(d)));
  if (!all_multiples_of(f, gamma)) {
    note(report, "coefficients of f are not multiples of gamma = " + to_string(gamma) +
                     "; the kernel bound does not apply");
  }

  const RoundingOptions relaxed{false, config.threads};
  if (p == Rational(1, 2)) {
    const ProjectionResult projection =
        project_null(f, dist, ProjectionOptions{config.rational_cap, config.float_tol});
    report.projection_exact = projection.exact;
    if (!projection.exact) note(report, "null-space projection solved in floating point");
    const Rational residual = to_rational(projection.residual_norm_sq, "projection residual");
    if (residual * residual > n) {
      note(report, "projection residual squared exceeds n; rounding may move coefficients");
    }
    report.path = "bisection";
    report.rounding = round_bisection(f, projection.h, gamma, relaxed);
    report.blowup_bound = blowup_bound(d);
    if (report.rounding.norm_blowup) {
      report.blowup_within_bound = *report.rounding.norm_blowup <= report.blowup_bound;
    }
    report.kernel_bound = bisection_kernel_bound(d, variance, gamma);
    if (report.rounding.active_set.size() > config.kernel_cap) {
      RoundingOutcome global = round_global(f, dist, gamma, relaxed);
      if (global.active_set.size() < report.rounding.active_set.size()) {
        note(report, "bisection rounding left " +
                         std::to_string(report.rounding.active_set.size()) +
                         " active variables; used the subset scan instead");
        report.path = "global";
        report.rounding = std::move(global);
        report.blowup_within_bound.reset();
        report.kernel_bound = global_kernel_bound(d, p, variance, gamma);
      }
    }
  } else {
    if (variance * variance >= n) {
      note(report, "variance squared is at least n; the subset scan may not reach the bound");
    }
    report.path = "global";
    report.rounding = round_global(f, dist, gamma, relaxed);
    report.blowup_bound = blowup_bound(d);
    report.kernel_bound = global_kernel_bound(d, p, variance, gamma);
  }
  report.h_on_lattice = all_multiples_of(report.rounding.h, report.rounding.granularity);
  report.kernel_within_bound = Rational(static_cast<long>(report.rounding.active_set.size())) <=
                               report.kernel_bound;
  if (!report.kernel_within_bound) {
    note(report, "kernel of " + std::to_string(report.rounding.active_set.size()) +
                     " variables exceeds the rounding bound " + to_string(report.kernel_bound));
  }
  return report;
}

Verdict decide_polynomial(const MultilinearPoly& f, const GlobalCardinality& card,
                          const Rational& t, const SolverConfig& config) {
  if (f.n() != card.n()) throw InputError("polynomial and cardinality disagree on n");
  if (f.basis().kind() != BasisKind::chi) throw InputError("decide_polynomial needs the chi basis");
  const Rational& p = card.p();
  if (p < config.p0 || p > 1 - config.p0) {
    throw InputError("p = " + to_string(p) + " lies outside [p0, 1 - p0] with p0 = " +
                     to_string(config.p0));
  }
  const CardinalDist dist(card.n(), p);
  const std::size_t d = std::max<std::size_t>(1, f.degree());

  Verdict verdict;
  verdict.t = t;
  verdict.avg = to_rational(expectation(f, dist), "average");
  verdict.variance = to_rational(variance(f, dist), "variance");
  verdict.threshold = certification_threshold(d, p, t);

  if (t <= 0) {
    verdict.yes = true;
    verdict.answer = Answer::trivial;
    verdict.branch = Branch::trivial;
    return verdict;
  }
  if (QuadScalar(verdict.variance) >= verdict.threshold) {
    verdict.yes = true;
    verdict.answer = Answer::certified_above;
    verdict.branch = Branch::large_variance;
    return verdict;
  }

  verdict.branch = Branch::small_variance;
  if (t * t * t * t > Rational(static_cast<long>(card.n())) / 4) {
    note(verdict, "t^2 exceeds sqrt(n)/2; the rounding bounds are stated for smaller t");
  }
  KernelReport report = extract_kernel(f, card, config);
  verdict.warnings.insert(verdict.warnings.end(), report.warnings.begin(), report.warnings.end());
  verdict.kernel = report.rounding.active_set;
  const RoundingOutcome& rounding = report.rounding;
  verdict.kernel_report = report;

  KernelOptimum optimum =
      enumerate_kernel(rounding.reduced, rounding.active_set, card, rounding.offset, config);
  const QuadScalar check = evaluate(f, optimum.witness);
  if (check != QuadScalar(optimum.opt)) {
    throw NumericalError("witness value " + check.to_string() + " disagrees with kernel optimum " +
                         to_string(optimum.opt));
  }
  verdict.answer = Answer::solved_exactly;
  verdict.opt = optimum.opt;
  verdict.witness = std::move(optimum.witness);
  verdict.yes = *verdict.opt >= verdict.avg + t;
  return verdict;
}

Verdict decide(const CspInstance& instance, const GlobalCardinality& card, const Rational& t,
               const SolverConfig& config) {
  if (instance.n() != card.n()) throw InputError("instance and cardinality disagree on n");
  Verdict verdict = decide_polynomial(to_polynomial(instance), card, t, config);
  if (verdict.witness) {
    if (!card.admits(*verdict.witness)) throw NumericalError("witness violates the cardinality");
    const auto count = constraint_count(instance, *verdict.witness);
    if (Rational(static_cast<long>(count)) != *verdict.opt) {
      throw NumericalError("witness satisfies " + std::to_string(count) +
                           " constraints, kernel optimum is " + to_string(*verdict.opt));
    }
  }
  return verdict;
}

}  // namespace cardcsp
