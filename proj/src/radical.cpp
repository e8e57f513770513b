#include "mapscale/radical.hpp"

#include <mpfr.h>

#include <stdexcept>
#include <vector>

namespace mapscale {

namespace {

std::vector<std::pair<Integer, unsigned long>> factorize(Integer n) {
  std::vector<std::pair<Integer, unsigned long>> out;
  for (unsigned long p = 2; p < 1000000 && Integer(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    unsigned long m = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++m;
    }
    if (m) out.emplace_back(Integer(p), m);
  }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 40) == 0) throw std::runtime_error("cannot factor " + n.get_str());
    out.emplace_back(n, 1);
  }
  return out;
}

}  // namespace

Radical::Radical(const Rational& q) {
  if (sgn(q) == 0) throw std::domain_error("zero has no radical form");
  sign_ = sgn(q);
  for (auto& [p, m] : factorize(abs(q.get_num()))) exps_[p] += Rational(m);
  for (auto& [p, m] : factorize(q.get_den())) exps_[p] -= Rational(m);
}

Radical Radical::pow(const Rational& e) const {
  Radical r;
  if (sign_ < 0) {
    if (e.get_den() != 1) throw std::domain_error("fractional power of a negative radical");
    r.sign_ = mpz_odd_p(e.get_num_mpz_t()) ? -1 : 1;
  }
  for (auto& [p, x] : exps_) {
    Rational y = x * e;
    if (sgn(y) != 0) r.exps_[p] = y;
  }
  return r;
}

Radical Radical::operator*(const Radical& o) const {
  Radical r = *this;
  r.sign_ *= o.sign_;
  for (auto& [p, x] : o.exps_) {
    Rational y = r.exps_[p] + x;
    if (sgn(y) == 0)
      r.exps_.erase(p);
    else
      r.exps_[p] = y;
  }
  return r;
}

Radical Radical::operator/(const Radical& o) const { return *this * o.pow(-1); }

bool Radical::is_rational() const {
  for (auto& [p, x] : exps_)
    if (x.get_den() != 1) return false;
  return true;
}

Rational Radical::to_rational() const {
  if (!is_rational()) throw std::domain_error("radical " + str() + " is irrational");
  Rational r(sign_);
  for (auto& [p, x] : exps_) {
    Integer pk;
    mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), Integer(abs(x.get_num())).get_ui());
    r *= sgn(x) > 0 ? Rational(pk) : Rational(1, pk);
  }
  r.canonicalize();
  return r;
}

std::string Radical::decimal(int digits) const {
  long bits = static_cast<long>(digits * 3.33) + 64;
  mpfr_t acc, f, ex;
  mpfr_inits2(bits, acc, f, ex, (mpfr_ptr)0);
  mpfr_set_si(acc, sign_, MPFR_RNDN);
  for (auto& [p, x] : exps_) {
    mpfr_set_z(f, p.get_mpz_t(), MPFR_RNDN);
    mpfr_set_q(ex, x.get_mpq_t(), MPFR_RNDN);
    mpfr_pow(f, f, ex, MPFR_RNDN);
    mpfr_mul(acc, acc, f, MPFR_RNDN);
  }
  std::vector<char> buf(digits + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, acc);
  mpfr_clears(acc, f, ex, (mpfr_ptr)0);
  return buf.data();
}

double Radical::to_double() const { return std::stod(decimal(20)); }

long double Radical::to_long_double() const { return std::stold(decimal(25)); }

// integer exponent parts are folded into the integer numerator/denominator
std::string Radical::str() const {
  Integer num = 1, den = 1;
  std::string num_rad, den_rad;
  for (auto& [p, x] : exps_) {
    Rational ax = abs(x);
    Integer whole = ax.get_num() / ax.get_den();
    Rational frac = ax - whole;
    Integer pk;
    if (frac == 0) {
      mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), whole.get_ui());
      (sgn(x) > 0 ? num : den) *= pk;
      continue;
    }
    std::string& dst = sgn(x) > 0 ? num_rad : den_rad;
    if (!dst.empty()) dst += "*";
    dst += p.get_str() + "^(" + ax.get_str() + ")";
  }
  std::string top = num != 1 || num_rad.empty() ? num.get_str() : "";
  if (!num_rad.empty()) top += (top.empty() ? "" : "*") + num_rad;
  std::string bottom;
  if (den != 1) bottom = den.get_str();
  if (!den_rad.empty()) bottom += (bottom.empty() ? "" : "*") + den_rad;
  bool group = den != 1 && !den_rad.empty();
  std::string s = (sign_ < 0 ? "-" : "") + top;
  if (!bottom.empty()) s += "/" + (group ? "(" + bottom + ")" : bottom);
  return s;
}

}  // namespace mapscale
