#include "cardcsp/poly.hpp"

#include <algorithm>
#include <set>

#include "cardcsp/errors.hpp"

namespace cardcsp {

Basis::Basis(BasisKind kind, const Rational& p) : kind_(kind), p_(p) {
  p_.canonicalize();
  if (kind_ == BasisKind::chi) {
    q_ = QuadScalar(0);
    plus_ = QuadScalar(1);
    minus_ = QuadScalar(-1);
    return;
  }
  if (p <= 0 || p >= 1) throw InputError("bias must lie strictly between 0 and 1");
  const QuadScalar s = QuadScalar::sqrt_of(p * (1 - p));
  q_ = QuadScalar(2 * p - 1) / s;
  plus_ = s / QuadScalar(1 - p);
  minus_ = -(s / QuadScalar(p));
}

Basis Basis::chi() { return Basis(BasisKind::chi, Rational(1, 2)); }

Basis Basis::phi(const Rational& p) { return Basis(BasisKind::phi, p); }

Assignment::Assignment(std::vector<int> values) : values_(std::move(values)) {
  for (int v : values_) {
    if (v != 1 && v != -1) throw InputError("assignment entries must be +1 or -1");
  }
}

void Assignment::set(std::uint32_t var, int value) {
  if (var == 0 || var > values_.size()) throw InputError("variable index out of range");
  if (value != 1 && value != -1) throw InputError("assignment entries must be +1 or -1");
  values_[var - 1] = value;
}

int Assignment::sum() const {
  int total = 0;
  for (int v : values_) total += v;
  return total;
}

std::size_t Assignment::count(int value) const {
  return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), value));
}

MultilinearPoly::MultilinearPoly(std::uint32_t n, Basis basis) : n_(n), basis_(std::move(basis)) {}

MultilinearPoly MultilinearPoly::constant(std::uint32_t n, const Basis& basis,
                                          const QuadScalar& value) {
  MultilinearPoly out(n, basis);
  out.add_term({}, value);
  return out;
}

MultilinearPoly MultilinearPoly::monomial(std::uint32_t n, const Basis& basis, const Subset& set,
                                          const QuadScalar& coeff) {
  MultilinearPoly out(n, basis);
  out.add_term(set, coeff);
  return out;
}

MultilinearPoly MultilinearPoly::variable_sum(std::uint32_t n, const Basis& basis) {
  MultilinearPoly out(n, basis);
  for (std::uint32_t i = 1; i <= n; ++i) out.add_term({i}, QuadScalar(1));
  return out;
}

std::size_t MultilinearPoly::degree() const {
  std::size_t deg = 0;
  for (const auto& [set, coeff] : terms_) deg = std::max(deg, set.size());
  return deg;
}

QuadScalar MultilinearPoly::coefficient(const Subset& set) const {
  auto it = terms_.find(set);
  return it == terms_.end() ? QuadScalar() : it->second;
}

void MultilinearPoly::validate(const Subset& set) const {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i] == 0 || set[i] > n_) throw InputError("variable index out of range");
    if (i > 0 && set[i] <= set[i - 1]) throw InputError("subset must be strictly increasing");
  }
}

void MultilinearPoly::add_term(const Subset& set, const QuadScalar& coeff) {
  if (coeff.is_zero()) return;
  validate(set);
  auto [it, inserted] = terms_.try_emplace(set, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void MultilinearPoly::set_coefficient(const Subset& set, const QuadScalar& coeff) {
  validate(set);
  if (coeff.is_zero()) {
    terms_.erase(set);
  } else {
    terms_[set] = coeff;
  }
}

MultilinearPoly MultilinearPoly::homogeneous_part(std::size_t k) const {
  MultilinearPoly out(n_, basis_);
  for (const auto& [set, coeff] : terms_) {
    if (set.size() == k) out.terms_.emplace_hint(out.terms_.end(), set, coeff);
  }
  return out;
}

MultilinearPoly MultilinearPoly::without_constant() const {
  MultilinearPoly out = *this;
  out.terms_.erase(Subset{});
  return out;
}

void MultilinearPoly::check_compatible(const MultilinearPoly& other) const {
  if (n_ != other.n_) throw InputError("polynomials have different variable counts");
  if (!(basis_ == other.basis_)) throw InputError("polynomials are in different bases");
}

MultilinearPoly& MultilinearPoly::operator+=(const MultilinearPoly& other) {
  check_compatible(other);
  for (const auto& [set, coeff] : other.terms_) add_term(set, coeff);
  return *this;
}

MultilinearPoly& MultilinearPoly::operator-=(const MultilinearPoly& other) {
  check_compatible(other);
  for (const auto& [set, coeff] : other.terms_) add_term(set, -coeff);
  return *this;
}

MultilinearPoly& MultilinearPoly::operator*=(const QuadScalar& scale) {
  if (scale.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [set, coeff] : terms_) coeff *= scale;
  return *this;
}

MultilinearPoly MultilinearPoly::operator-() const {
  MultilinearPoly out = *this;
  for (auto& [set, coeff] : out.terms_) coeff = -coeff;
  return out;
}

std::ostream& operator<<(std::ostream& out, const MultilinearPoly& f) {
  if (f.is_zero()) return out << "0";
  bool first = true;
  for (const auto& [set, coeff] : f.terms()) {
    if (!first) out << " + ";
    first = false;
    out << "(" << coeff << ")";
    for (auto v : set) out << (f.basis().kind() == BasisKind::chi ? "*x" : "*phi") << v;
  }
  return out;
}

QuadScalar evaluate(const MultilinearPoly& f, const Assignment& a) {
  if (a.size() != f.n()) throw InputError("assignment length does not match polynomial");
  const Basis& basis = f.basis();
  QuadScalar total;
  if (basis.kind() == BasisKind::chi) {
    for (const auto& [set, coeff] : f.terms()) {
      int sign = 1;
      for (std::uint32_t v : set) sign *= a[v];
      if (sign > 0) {
        total += coeff;
      } else {
        total -= coeff;
      }
    }
    return total;
  }
  // Products of basis values only depend on how many +1 and -1 entries the
  // term sees, so cache the powers.
  std::vector<QuadScalar> plus_pow{QuadScalar(1)};
  std::vector<QuadScalar> minus_pow{QuadScalar(1)};
  for (const auto& [set, coeff] : f.terms()) {
    std::size_t plus = 0;
    for (std::uint32_t v : set) plus += a[v] > 0 ? 1 : 0;
    const std::size_t minus = set.size() - plus;
    while (plus_pow.size() <= plus) plus_pow.push_back(plus_pow.back() * basis.at(1));
    while (minus_pow.size() <= minus) minus_pow.push_back(minus_pow.back() * basis.at(-1));
    total += coeff * plus_pow[plus] * minus_pow[minus];
  }
  return total;
}

namespace {

struct Overlap {
  Subset sym_diff;
  Subset common;
};

Overlap split(const Subset& lhs, const Subset& rhs) {
  Overlap out;
  auto i = lhs.begin();
  auto j = rhs.begin();
  while (i != lhs.end() || j != rhs.end()) {
    if (j == rhs.end() || (i != lhs.end() && *i < *j)) {
      out.sym_diff.push_back(*i++);
    } else if (i == lhs.end() || *j < *i) {
      out.sym_diff.push_back(*j++);
    } else {
      out.common.push_back(*i);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

MultilinearPoly multiply(const MultilinearPoly& f, const MultilinearPoly& g) {
  if (f.n() != g.n()) throw InputError("polynomials have different variable counts");
  if (!(f.basis() == g.basis())) throw InputError("polynomials are in different bases");
  MultilinearPoly out(f.n(), f.basis());
  const bool chi = f.basis().kind() == BasisKind::chi;
  const QuadScalar& q = f.basis().q();
  std::vector<QuadScalar> q_pow{QuadScalar(1)};
  for (const auto& [s, cs] : f.terms()) {
    for (const auto& [t, ct] : g.terms()) {
      const QuadScalar prod = cs * ct;
      Overlap parts = split(s, t);
      if (chi || parts.common.empty() || q.is_zero()) {
        out.add_term(parts.sym_diff, prod);
        continue;
      }
      // phi_i^2 = q phi_i + 1 on every shared index.
      while (q_pow.size() <= parts.common.size()) q_pow.push_back(q_pow.back() * q);
      for (const Subset& extra : all_subsets(parts.common)) {
        out.add_term(set_union(parts.sym_diff, extra), prod * q_pow[extra.size()]);
      }
    }
  }
  return out;
}

namespace {

// Expands each basis function of `from` as an affine function of the target
// basis function: b_i = slope * b'_i + offset.
MultilinearPoly affine_expand(const MultilinearPoly& f, const Basis& target,
                              const QuadScalar& slope, const QuadScalar& offset) {
  MultilinearPoly out(f.n(), target);
  std::vector<QuadScalar> slope_pow{QuadScalar(1)};
  std::vector<QuadScalar> offset_pow{QuadScalar(1)};
  for (const auto& [set, coeff] : f.terms()) {
    while (slope_pow.size() <= set.size()) slope_pow.push_back(slope_pow.back() * slope);
    while (offset_pow.size() <= set.size()) offset_pow.push_back(offset_pow.back() * offset);
    for (const Subset& part : all_subsets(set)) {
      out.add_term(part, coeff * slope_pow[part.size()] * offset_pow[set.size() - part.size()]);
    }
  }
  return out;
}

}  // namespace

MultilinearPoly convert_basis(const MultilinearPoly& f, const Basis& target) {
  const Basis& source = f.basis();
  if (source == target) return f;
  if (source.kind() == BasisKind::phi && target.kind() == BasisKind::phi) {
    return convert_basis(convert_basis(f, Basis::chi()), target);
  }
  if (source.kind() == BasisKind::chi) {
    // x_i = 2 sqrt(p(1-p)) phi_i + (1 - 2p)
    const Rational& p = target.bias();
    const QuadScalar two_s = QuadScalar(2) * QuadScalar::sqrt_of(p * (1 - p));
    return affine_expand(f, target, two_s, QuadScalar(1 - 2 * p));
  }
  // phi_i = x_i / (2s) - (1-2p)/(2s)
  const Rational& p = source.bias();
  const QuadScalar two_s = QuadScalar(2) * QuadScalar::sqrt_of(p * (1 - p));
  const QuadScalar slope = QuadScalar(1) / two_s;
  return affine_expand(f, target, slope, -(QuadScalar(1 - 2 * p) * slope));
}

QuadScalar l2_norm_sq(const MultilinearPoly& f) {
  QuadScalar total;
  for (const auto& [set, coeff] : f.terms()) total += coeff * coeff;
  return total;
}

MultilinearPoly restrict(const MultilinearPoly& f, const PartialAssignment& fixed) {
  if (f.basis().kind() != BasisKind::chi) throw InputError("restrict expects the chi basis");
  for (const auto& [var, value] : fixed) {
    if (var == 0 || var > f.n()) throw InputError("variable index out of range");
    if (value != 1 && value != -1) throw InputError("fixed values must be +1 or -1");
  }
  MultilinearPoly out(f.n(), f.basis());
  for (const auto& [set, coeff] : f.terms()) {
    Subset rest;
    int sign = 1;
    for (std::uint32_t v : set) {
      auto it = fixed.find(v);
      if (it == fixed.end()) {
        rest.push_back(v);
      } else {
        sign *= it->second;
      }
    }
    out.add_term(rest, sign > 0 ? coeff : -coeff);
  }
  return out;
}

std::vector<std::uint32_t> active_variables(const MultilinearPoly& f) {
  std::set<std::uint32_t> vars;
  for (const auto& [set, coeff] : f.terms()) vars.insert(set.begin(), set.end());
  return {vars.begin(), vars.end()};
}

}  // namespace cardcsp
