#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <utility>

#include "lindyn/errors.hpp"

namespace lindyn {

// Exact rational scalar. Canonical form throughout: lowest terms, positive
// denominator, zero stored as 0/1. Every operation is exact; there is no
// floating-point path anywhere in the library.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // integers embed implicitly
  Rational(long num, long den) {
    if (den == 0) throw InvalidInput("Rational: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Rational(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }

  // Accepts "num" or "num/den" with optional sign, base 10.
  static Rational from_string(std::string_view text);

  // Smallest handy rational upper bound for sqrt(s), s >= 0: ceil-sqrt of
  // the numerator over floor-sqrt of the denominator.
  static Rational sqrt_upper_bound(const Rational& s) {
    if (s.sign() < 0) throw InvalidInput("sqrt_upper_bound: negative input");
    mpz_class num_root, den_root;
    mpz_sqrt(num_root.get_mpz_t(), s.v_.get_num().get_mpz_t());
    if (num_root * num_root < s.v_.get_num()) num_root += 1;
    mpz_sqrt(den_root.get_mpz_t(), s.v_.get_den().get_mpz_t());
    return Rational(mpq_class(num_root, den_root));
  }

  // 2^k for any integer k (negative gives a dyadic fraction).
  static Rational pow2(long k) {
    mpz_class p = 1;
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(k < 0 ? -k : k));
    if (k >= 0) return Rational(mpq_class(p));
    mpq_class q(1);
    q /= mpq_class(p);
    return Rational(std::move(q));
  }

  bool is_zero() const { return mpq_sgn(v_.get_mpq_t()) == 0; }
  int sign() const { return mpq_sgn(v_.get_mpq_t()); }
  bool is_integer() const { return v_.get_den() == 1; }
  bool is_dyadic() const { return mpz_popcount(v_.get_den().get_mpz_t()) == 1; }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational abs() const { return sign() < 0 ? -*this : *this; }
  Rational squared() const { return *this * *this; }

  Rational inverse() const {
    if (is_zero()) throw InvalidInput("Rational: inverse of zero");
    mpq_class r;
    mpq_inv(r.get_mpq_t(), v_.get_mpq_t());
    return Rational(std::move(r));
  }

  // Integer power; negative exponents require a nonzero base.
  Rational pow(long e) const {
    if (e == 0) return Rational(1);
    if (e < 0) return inverse().pow(-e);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), v_.get_num().get_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), v_.get_den().get_mpz_t(), static_cast<unsigned long>(e));
    return Rational(mpq_class(n, d));  // coprime powers of coprime parts
  }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_)); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw InvalidInput("Rational: division by zero");
    return Rational(mpq_class(a.v_ / b.v_));
  }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) >= 0; }

  // Canonical rendering "num/den" ("3/1", "0/1", "-5/8").
  std::string str() const { return v_.get_num().get_str() + "/" + v_.get_den().get_str(); }

  const mpq_class& raw() const { return v_; }

 private:
  mpq_class v_;
};

inline Rational Rational::from_string(std::string_view text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) {
      return Rational(mpq_class(mpz_class(std::string(text))));
    }
    mpz_class num{std::string(text.substr(0, slash))};
    mpz_class den{std::string(text.substr(slash + 1))};
    if (den == 0) throw InvalidInput("Rational: zero denominator in \"" + std::string(text) + "\"");
    return Rational(mpq_class(num, den));
  } catch (const std::invalid_argument&) {
    throw InvalidInput("Rational: cannot parse \"" + std::string(text) + "\"");
  }
}

}  // namespace lindyn
