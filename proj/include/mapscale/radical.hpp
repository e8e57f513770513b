#pragma once

#include "mapscale/exact.hpp"

#include <map>
#include <string>

namespace mapscale {

// sign * prod p_i^(e_i) with primes p_i and rational exponents e_i
class Radical {
 public:
  Radical() : sign_(1) {}
  Radical(const Rational& q);
  Radical(long v) : Radical(Rational(v)) {}

  static Radical power(const Rational& base, const Rational& e) { return Radical(base).pow(e); }

  Radical pow(const Rational& e) const;
  Radical operator*(const Radical& o) const;
  Radical operator/(const Radical& o) const;
  bool operator==(const Radical& o) const { return sign_ == o.sign_ && exps_ == o.exps_; }

  int sign() const { return sign_; }
  bool is_rational() const;
  Rational to_rational() const;
  double to_double() const;
  long double to_long_double() const;
  std::string decimal(int digits) const;
  std::string str() const;

 private:
  struct Less {
    bool operator()(const Integer& x, const Integer& y) const { return cmp(x, y) < 0; }
  };
  int sign_;
  std::map<Integer, Rational, Less> exps_;
};

}  // namespace mapscale
