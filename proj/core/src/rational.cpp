#include "coxfine/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>

#include "coxfine/errors.hpp"

namespace coxfine {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad_number(std::string_view text, const char* why) {
  throw Error(ErrorCode::kParse,
              "malformed rational '" + std::string(text) + "': " + why);
}

}  // namespace

Rational::Rational(long num, long den) {
  if (den == 0) throw Error(ErrorCode::kParse, "zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(mpq_class value) : q_(std::move(value)) { q_.canonicalize(); }

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorCode::kParse, "division by zero");
  q_ /= o.q_;
  return *this;
}

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body.empty()) bad_number(text, "empty");

  mpq_class value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto num = body.substr(0, slash);
    const auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_number(text, "expected digits/digits");
    mpz_class d(std::string(den), 10);
    if (d == 0) bad_number(text, "zero denominator");
    value = mpq_class(mpz_class(std::string(num), 10), d);
    value.canonicalize();
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto whole = body.substr(0, dot);
    const auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) {
      bad_number(text, "expected a finite decimal");
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class digits(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    value = mpq_class(digits, scale);
    value.canonicalize();
  } else {
    if (!all_digits(body)) bad_number(text, "expected digits");
    value = mpq_class(mpz_class(std::string(body), 10));
  }
  if (negative) value = -value;
  return Rational(std::move(value));
}

Rational Rational::pow10(int exponent) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(exponent)));
  return exponent >= 0 ? Rational(mpq_class(p)) : Rational(mpq_class(mpz_class(1), p));
}

std::string Rational::str() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

bool Rational::is_integer() const { return q_.get_den() == 1; }

std::size_t Rational::hash() const {
  // Low limbs of numerator and denominator are enough to spread canonical values.
  const auto* num = q_.get_num_mpz_t();
  const auto* den = q_.get_den_mpz_t();
  std::size_t h = static_cast<std::size_t>(num->_mp_size);
  if (num->_mp_size != 0) h ^= std::hash<mp_limb_t>{}(num->_mp_d[0]) * 0x9E3779B97F4A7C15ULL;
  h ^= std::hash<mp_limb_t>{}(den->_mp_d[0]) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
  return h;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

std::string approx_decimal(const Rational& r, int digits) {
  mpf_class f(r.mpq(), 256);
  mp_exp_t exp = 0;
  std::string mant = f.get_str(exp, 10, static_cast<std::size_t>(digits));
  if (mant.empty() || mant == "0") return "0";
  bool neg = mant.front() == '-';
  if (neg) mant.erase(0, 1);
  std::string out = neg ? "-" : "";
  out += mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  out += "e" + std::to_string(static_cast<long>(exp) - 1);
  return out;
}

}  // namespace coxfine
