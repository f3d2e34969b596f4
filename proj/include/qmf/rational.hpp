#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace qmf {

// Reduced fraction num/den with den >= 1; zero is 0/1.
class Rational {
 public:
  Rational() = default;
  Rational(long n);  // NOLINT(google-explicit-constructor)
  explicit Rational(const mpz_class& n);
  // Throws DomainError when den == 0.
  Rational(const mpz_class& num, const mpz_class& den);

  // Accepts "p/q" or "n", optional leading sign.
  static Rational parse(std::string_view text);

  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return den() == 1; }

  mpz_class floor() const;
  mpz_class ceil() const;
  // x - floor(x), in [0, 1).
  Rational frac() const;
  Rational abs() const;
  Rational inverse() const;

  double to_double() const;
  // Natural log of |x|; finite for x != 0 regardless of operand size.
  double log_abs() const;

  std::string str() const;

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a);

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  mpq_class v_;
};

Rational reduce(const mpz_class& p, const mpz_class& q);

// Natural log of a nonzero integer of any size.
double log_abs(const mpz_class& n);

std::ostream& operator<<(std::ostream& os, const Rational& x);

}  // namespace qmf
