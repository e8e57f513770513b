#pragma once

#include <gmpxx.h>

#include <string>

namespace mapscale {

using Integer = mpz_class;
using Rational = mpq_class;

struct CoeffField {
  enum class Kind { Rational, QuadraticExt };

  Kind kind = Kind::Rational;
  long d = 0;

  static CoeffField rational() { return {}; }
  static CoeffField quadratic(long d);

  bool operator==(const CoeffField&) const = default;
  std::string name() const;
};

// a + b*sqrt(d).  d == 0 marks a plain rational that embeds into any Q(sqrt(d)).
class QuadExt {
 public:
  QuadExt() = default;
  QuadExt(long v) : a_(v) {}
  QuadExt(const Integer& v) : a_(v) {}
  QuadExt(const Rational& a) : a_(a) {}
  QuadExt(const Rational& a, const Rational& b, long d);

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  long d() const { return d_; }
  bool is_rational() const { return sgn(b_) == 0; }
  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }

  QuadExt operator-() const;
  QuadExt& operator+=(const QuadExt& o);
  QuadExt& operator-=(const QuadExt& o);
  QuadExt& operator*=(const QuadExt& o);
  QuadExt& operator/=(const QuadExt& o);
  friend QuadExt operator+(QuadExt x, const QuadExt& y) { return x += y; }
  friend QuadExt operator-(QuadExt x, const QuadExt& y) { return x -= y; }
  friend QuadExt operator*(QuadExt x, const QuadExt& y) { return x *= y; }
  friend QuadExt operator/(QuadExt x, const QuadExt& y) { return x /= y; }
  bool operator==(const QuadExt& o) const;

  QuadExt conj() const;
  Rational norm() const;
  QuadExt inverse() const;
  int sign() const;

  double to_double() const;
  std::string str() const;

  // x with x^2 == q inside Q(sqrt(d)); throws when no such x exists.
  static QuadExt sqrt_of(const Rational& q, long d);

 private:
  static long join(long d1, long d2);

  Rational a_, b_;
  long d_ = 0;
};

std::string to_string(const Rational& q);
double to_double(const Rational& q);
Rational parse_rational(const std::string& s);
bool is_perfect_square(const Rational& q, Rational* root = nullptr);

}  // namespace mapscale
