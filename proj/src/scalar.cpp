#include "cardcsp/scalar.hpp"

#include <cmath>

#include "cardcsp/errors.hpp"

namespace cardcsp {

Rational rational_from_string(const std::string& text) {
  Rational value;
  if (text.empty() || value.set_str(text, 10) != 0) {
    throw InputError("not a rational number: '" + text + "'");
  }
  if (value.get_den() == 0) throw InputError("zero denominator in '" + text + "'");
  value.canonicalize();
  return value;
}

std::string to_string(const Rational& value) { return value.get_str(); }

long double to_long_double(const Rational& value) {
  mpf_class f(value, 128);
  long exponent = 0;
  double mantissa = mpf_get_d_2exp(&exponent, f.get_mpf_t());
  return std::ldexp(static_cast<long double>(mantissa), static_cast<int>(exponent));
}

bool rational_sqrt(const Rational& value, Rational& root) {
  if (value < 0) return false;
  const mpz_class& num = value.get_num();
  const mpz_class& den = value.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) {
    return false;
  }
  mpz_class num_root;
  mpz_class den_root;
  mpz_sqrt(num_root.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(den_root.get_mpz_t(), den.get_mpz_t());
  root = Rational(num_root, den_root);
  root.canonicalize();
  return true;
}

// Two-argument mpq_class construction does not canonicalize, so every entry
// point does.
QuadScalar::QuadScalar(const Rational& value) : a_(value) { a_.canonicalize(); }

QuadScalar::QuadScalar(const Rational& rational_part, const Rational& surd_part,
                       const Rational& radicand)
    : a_(rational_part), b_(surd_part), r_(radicand) {
  a_.canonicalize();
  b_.canonicalize();
  r_.canonicalize();
  if (b_ != 0 && r_ <= 0) throw std::domain_error("radicand must be positive");
  normalize();
}

QuadScalar QuadScalar::sqrt_of(const Rational& radicand) {
  if (radicand < 0) throw std::domain_error("square root of a negative rational");
  if (radicand == 0) return QuadScalar();
  return QuadScalar(0, 1, radicand);
}

void QuadScalar::normalize() {
  if (b_ == 0) {
    r_ = 0;
    return;
  }
  // Rewrite sqrt(num/den) as sqrt(num*den)/den and pull square factors out
  // so that equal fields share one radicand.
  mpz_class m = r_.get_num() * r_.get_den();
  b_ /= Rational(r_.get_den());
  mpz_class outside = 1;
  for (unsigned long f = 2; f <= 1'000'000 && f * f <= m; ++f) {
    const unsigned long sq = f * f;
    while (mpz_divisible_ui_p(m.get_mpz_t(), sq) != 0) {
      m /= sq;
      outside *= f;
    }
  }
  if (mpz_perfect_square_p(m.get_mpz_t()) != 0) {
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), m.get_mpz_t());
    outside *= root;
    m = 1;
  }
  b_ *= Rational(outside);
  if (m == 1) {
    a_ += b_;
    b_ = 0;
    r_ = 0;
    return;
  }
  r_ = Rational(m);
}

const Rational& QuadScalar::shared_radicand(const QuadScalar& other) const {
  if (b_ == 0) return other.r_;
  if (other.b_ == 0 || r_ == other.r_) return r_;
  throw std::domain_error("mixing values from different quadratic fields");
}

int QuadScalar::sign() const {
  int sa = sgn(a_);
  int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  Rational lhs = a_ * a_;
  Rational rhs = b_ * b_ * r_;
  int cmp = ::cmp(lhs, rhs);
  if (cmp == 0) return 0;
  return cmp > 0 ? sa : sb;
}

long double QuadScalar::to_long_double() const {
  long double value = cardcsp::to_long_double(a_);
  if (b_ != 0) value += cardcsp::to_long_double(b_) * std::sqrt(cardcsp::to_long_double(r_));
  return value;
}

std::string QuadScalar::to_string() const {
  if (b_ == 0) return a_.get_str();
  std::string out;
  if (a_ != 0) out = a_.get_str() + (b_ > 0 ? "+" : "");
  out += b_.get_str() + "*sqrt(" + r_.get_str() + ")";
  return out;
}

QuadScalar& QuadScalar::operator+=(const QuadScalar& other) {
  if (other.b_ != 0) {
    if (b_ == 0) {
      r_ = other.r_;
    } else if (r_ != other.r_) {
      throw std::domain_error("mixing values from different quadratic fields");
    }
    b_ += other.b_;
    if (b_ == 0) r_ = 0;
  }
  a_ += other.a_;
  return *this;
}

QuadScalar& QuadScalar::operator-=(const QuadScalar& other) {
  if (other.b_ != 0) {
    if (b_ == 0) {
      r_ = other.r_;
    } else if (r_ != other.r_) {
      throw std::domain_error("mixing values from different quadratic fields");
    }
    b_ -= other.b_;
    if (b_ == 0) r_ = 0;
  }
  a_ -= other.a_;
  return *this;
}

QuadScalar& QuadScalar::operator*=(const QuadScalar& other) {
  if (other.b_ == 0) {
    a_ *= other.a_;
    b_ *= other.a_;
    if (b_ == 0) r_ = 0;
    return *this;
  }
  if (b_ != 0 && r_ != other.r_) {
    throw std::domain_error("mixing values from different quadratic fields");
  }
  Rational a = a_ * other.a_ + b_ * other.b_ * other.r_;
  Rational b = a_ * other.b_ + b_ * other.a_;
  r_ = b == 0 ? Rational(0) : other.r_;
  a_ = std::move(a);
  b_ = std::move(b);
  return *this;
}

QuadScalar& QuadScalar::operator/=(const QuadScalar& other) {
  if (other.is_zero()) throw std::domain_error("division by zero");
  if (other.b_ == 0) {
    a_ /= other.a_;
    b_ /= other.a_;
    return *this;
  }
  const Rational r = shared_radicand(other);
  Rational norm = other.a_ * other.a_ - other.b_ * other.b_ * r;
  QuadScalar conjugate(other.a_ / norm, -other.b_ / norm, r);
  return *this *= conjugate;
}

QuadScalar QuadScalar::operator-() const {
  QuadScalar out = *this;
  out.a_ = -out.a_;
  out.b_ = -out.b_;
  return out;
}

bool operator==(const QuadScalar& lhs, const QuadScalar& rhs) {
  if (lhs.a_ != rhs.a_ || lhs.b_ != rhs.b_) return false;
  return lhs.b_ == 0 || lhs.r_ == rhs.r_;
}

std::strong_ordering operator<=>(const QuadScalar& lhs, const QuadScalar& rhs) {
  int s = (lhs - rhs).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& out, const QuadScalar& value) {
  return out << value.to_string();
}

QuadScalar abs(const QuadScalar& value) { return value.sign() < 0 ? -value : value; }

QuadScalar pow(QuadScalar base, unsigned exponent) {
  QuadScalar result(1);
  while (exponent > 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent > 0) base *= base;
  }
  return result;
}

int compare_mixed(const QuadScalar& lhs, const QuadScalar& rhs) {
  if (lhs.is_rational() || rhs.is_rational() || lhs.radicand() == rhs.radicand()) {
    return (lhs - rhs).sign();
  }
  long double l = lhs.to_long_double();
  long double r = rhs.to_long_double();
  return (l > r) - (l < r);
}

}  // namespace cardcsp
