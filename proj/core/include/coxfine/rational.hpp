#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace coxfine {

// Exact arbitrary-precision rational, always kept in canonical form
// (gcd(|num|, den) = 1, den > 0). Thin value wrapper over mpq_class.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(mpq_class value);

  // Accepts "[+-]digits", "[+-]digits/digits" and finite decimals
  // "[+-]digits.digits". Throws ParseError on anything else.
  static Rational parse(std::string_view text);

  static Rational pow10(int exponent);

  // "p" when the denominator is 1, otherwise "p/q".
  std::string str() const;
  double to_double() const { return q_.get_d(); }

  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }
  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const;

  const mpq_class& mpq() const { return q_; }
  mpq_class& mpq() { return q_; }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.q_.get_mpq_t(), b.q_.get_mpq_t()) != 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = mpq_cmp(a.q_.get_mpq_t(), b.q_.get_mpq_t());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::size_t hash() const;

 private:
  mpq_class q_;
};

Rational abs(const Rational& r);

// Decimal rendering with the given number of significant digits; for reports only.
std::string approx_decimal(const Rational& r, int digits = 6);

}  // namespace coxfine

template <>
struct std::hash<coxfine::Rational> {
  std::size_t operator()(const coxfine::Rational& r) const noexcept { return r.hash(); }
};
