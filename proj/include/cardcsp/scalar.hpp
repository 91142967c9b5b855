#pragma once

#include <compare>
#include <ostream>
#include <string>

#include <gmpxx.h>

namespace cardcsp {

using Rational = mpq_class;

Rational rational_from_string(const std::string& text);
std::string to_string(const Rational& value);
long double to_long_double(const Rational& value);

// True when value is the square of a rational; root receives the square root.
bool rational_sqrt(const Rational& value, Rational& root);

// Exact element a + b*sqrt(r) of the quadratic field over the rationals.
// Construction rewrites r as a positive integer with its square factors
// (below 10^12) pulled into b, so equal fields share one radicand. Purely
// rational values carry r = 0 and b = 0.
class QuadScalar {
 public:
  QuadScalar() = default;
  QuadScalar(const Rational& value);  // NOLINT(google-explicit-constructor)
  QuadScalar(long value) : QuadScalar(Rational(value)) {}  // NOLINT
  QuadScalar(int value) : QuadScalar(Rational(value)) {}  // NOLINT
  QuadScalar(const Rational& rational_part, const Rational& surd_part,
             const Rational& radicand);

  // sqrt(radicand), collapsing to a rational when possible.
  static QuadScalar sqrt_of(const Rational& radicand);

  const Rational& rational_part() const { return a_; }
  const Rational& surd_part() const { return b_; }
  const Rational& radicand() const { return r_; }
  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  // Exact sign: -1, 0 or +1.
  int sign() const;
  long double to_long_double() const;
  double to_double() const { return static_cast<double>(to_long_double()); }
  std::string to_string() const;

  QuadScalar& operator+=(const QuadScalar& other);
  QuadScalar& operator-=(const QuadScalar& other);
  QuadScalar& operator*=(const QuadScalar& other);
  QuadScalar& operator/=(const QuadScalar& other);
  QuadScalar operator-() const;

  friend QuadScalar operator+(QuadScalar lhs, const QuadScalar& rhs) { return lhs += rhs; }
  friend QuadScalar operator-(QuadScalar lhs, const QuadScalar& rhs) { return lhs -= rhs; }
  friend QuadScalar operator*(QuadScalar lhs, const QuadScalar& rhs) { return lhs *= rhs; }
  friend QuadScalar operator/(QuadScalar lhs, const QuadScalar& rhs) { return lhs /= rhs; }

  friend bool operator==(const QuadScalar& lhs, const QuadScalar& rhs);
  friend std::strong_ordering operator<=>(const QuadScalar& lhs, const QuadScalar& rhs);

 private:
  void normalize();
  const Rational& shared_radicand(const QuadScalar& other) const;

  Rational a_;
  Rational b_;
  Rational r_;
};

std::ostream& operator<<(std::ostream& out, const QuadScalar& value);

QuadScalar abs(const QuadScalar& value);
QuadScalar pow(QuadScalar base, unsigned exponent);

// Compares values whose radicands may differ; falls back to long double
// only in that case.
int compare_mixed(const QuadScalar& lhs, const QuadScalar& rhs);

}  // namespace cardcsp
