#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cardcsp/scalar.hpp"
#include "cardcsp/subsets.hpp"

namespace cardcsp {

enum class BasisKind { chi, phi };

// Either the standard +-1 characters or the p-biased characters
// phi_i = (x_i - (1-2p)) / (2 sqrt(p(1-p))).
class Basis {
 public:
  static Basis chi();
  static Basis phi(const Rational& p);

  BasisKind kind() const { return kind_; }
  // The bias p; 1/2 for the standard basis.
  const Rational& bias() const { return p_; }
  // q = (2p-1)/sqrt(p(1-p)), so that phi_i^2 = q phi_i + 1. Zero for chi.
  const QuadScalar& q() const { return q_; }
  // Value of a single basis function at x_i = value (+1 or -1).
  const QuadScalar& at(int value) const { return value > 0 ? plus_ : minus_; }

  friend bool operator==(const Basis& lhs, const Basis& rhs) {
    return lhs.kind_ == rhs.kind_ && lhs.p_ == rhs.p_;
  }

 private:
  Basis(BasisKind kind, const Rational& p);

  BasisKind kind_;
  Rational p_;
  QuadScalar q_;
  QuadScalar plus_;
  QuadScalar minus_;
};

class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<int> values);

  std::size_t size() const { return values_.size(); }
  // 1-indexed access.
  int operator[](std::uint32_t var) const { return values_[var - 1]; }
  void set(std::uint32_t var, int value);
  const std::vector<int>& values() const { return values_; }
  int sum() const;
  std::size_t count(int value) const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;

 private:
  std::vector<int> values_;
};

// Variable -> fixed value (+1 or -1).
using PartialAssignment = std::map<std::uint32_t, int>;

class MultilinearPoly {
 public:
  using Terms = std::map<Subset, QuadScalar>;

  explicit MultilinearPoly(std::uint32_t n, Basis basis = Basis::chi());

  static MultilinearPoly constant(std::uint32_t n, const Basis& basis, const QuadScalar& value);
  static MultilinearPoly monomial(std::uint32_t n, const Basis& basis, const Subset& set,
                                  const QuadScalar& coeff);
  // sum_i x_i in the chi basis, sum_i phi_i in the phi basis.
  static MultilinearPoly variable_sum(std::uint32_t n, const Basis& basis);

  std::uint32_t n() const { return n_; }
  const Basis& basis() const { return basis_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  // Largest |S| with a nonzero coefficient; 0 for constants and for zero.
  std::size_t degree() const;

  QuadScalar coefficient(const Subset& set) const;
  QuadScalar constant_term() const { return coefficient({}); }
  // Adds coeff to the coefficient of set, validating the subset.
  void add_term(const Subset& set, const QuadScalar& coeff);
  void set_coefficient(const Subset& set, const QuadScalar& coeff);

  MultilinearPoly homogeneous_part(std::size_t k) const;
  MultilinearPoly without_constant() const;

  MultilinearPoly& operator+=(const MultilinearPoly& other);
  MultilinearPoly& operator-=(const MultilinearPoly& other);
  MultilinearPoly& operator*=(const QuadScalar& scale);
  MultilinearPoly operator-() const;

  friend MultilinearPoly operator+(MultilinearPoly lhs, const MultilinearPoly& rhs) {
    return lhs += rhs;
  }
  friend MultilinearPoly operator-(MultilinearPoly lhs, const MultilinearPoly& rhs) {
    return lhs -= rhs;
  }
  friend MultilinearPoly operator*(MultilinearPoly lhs, const QuadScalar& rhs) {
    return lhs *= rhs;
  }
  friend bool operator==(const MultilinearPoly& lhs, const MultilinearPoly& rhs) {
    return lhs.n_ == rhs.n_ && lhs.basis_ == rhs.basis_ && lhs.terms_ == rhs.terms_;
  }

 private:
  void check_compatible(const MultilinearPoly& other) const;
  void validate(const Subset& set) const;

  std::uint32_t n_;
  Basis basis_;
  Terms terms_;
};

std::ostream& operator<<(std::ostream& out, const MultilinearPoly& f);

QuadScalar evaluate(const MultilinearPoly& f, const Assignment& a);
MultilinearPoly multiply(const MultilinearPoly& f, const MultilinearPoly& g);
MultilinearPoly convert_basis(const MultilinearPoly& f, const Basis& target);
// Sum of squared coefficients.
QuadScalar l2_norm_sq(const MultilinearPoly& f);
// Substitutes the fixed values. The result keeps the same variable count;
// fixed variables simply no longer occur in it. Chi basis only.
MultilinearPoly restrict(const MultilinearPoly& f, const PartialAssignment& fixed);
// Variables occurring in some non-constant term, ascending.
std::vector<std::uint32_t> active_variables(const MultilinearPoly& f);

// Text format, '#' comments:
//   poly <n> chi            or   poly <n> phi <p>
//   t <coeff> [var ...]     one line per term, coefficients rational
// Repeated sets add up.
MultilinearPoly parse_polynomial(const std::string& text);
MultilinearPoly read_polynomial_file(const std::string& path);
// Rational coefficients only.
std::string format_polynomial(const MultilinearPoly& f);

}  // namespace cardcsp
