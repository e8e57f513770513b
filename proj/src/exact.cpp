#include "mapscale/exact.hpp"

#include <mpfr.h>

#include <algorithm>
#include <stdexcept>

namespace mapscale {

CoeffField CoeffField::quadratic(long d) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), Integer(d).get_mpz_t());
  if (d <= 1 || r * r == d) throw std::invalid_argument("quadratic extension needs a positive non-square d");
  return {Kind::QuadraticExt, d};
}

std::string CoeffField::name() const {
  return kind == Kind::Rational ? "Q" : "Q(sqrt(" + std::to_string(d) + "))";
}

QuadExt::QuadExt(const Rational& a, const Rational& b, long d) : a_(a), b_(b), d_(d) {
  a_.canonicalize();
  b_.canonicalize();
  if (sgn(b_) != 0 && d_ == 0) throw std::invalid_argument("irrational part without a radicand");
}

long QuadExt::join(long d1, long d2) {
  if (d1 == 0) return d2;
  if (d2 == 0 || d1 == d2) return d1;
  throw std::invalid_argument("mixing elements of different quadratic fields");
}

QuadExt QuadExt::operator-() const {
  QuadExt r = *this;
  r.a_ = -a_;
  r.b_ = -b_;
  return r;
}

QuadExt& QuadExt::operator+=(const QuadExt& o) {
  d_ = join(d_, o.d_);
  a_ += o.a_;
  if (sgn(o.b_) != 0) b_ += o.b_;
  return *this;
}

QuadExt& QuadExt::operator-=(const QuadExt& o) {
  d_ = join(d_, o.d_);
  a_ -= o.a_;
  if (sgn(o.b_) != 0) b_ -= o.b_;
  return *this;
}

QuadExt& QuadExt::operator*=(const QuadExt& o) {
  d_ = join(d_, o.d_);
  if (sgn(b_) == 0 && sgn(o.b_) == 0) {
    a_ *= o.a_;
    return *this;
  }
  Rational na = a_ * o.a_ + Rational(d_) * b_ * o.b_;
  Rational nb = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(na);
  b_ = std::move(nb);
  return *this;
}

QuadExt& QuadExt::operator/=(const QuadExt& o) { return *this *= o.inverse(); }

bool QuadExt::operator==(const QuadExt& o) const { return a_ == o.a_ && b_ == o.b_; }

QuadExt QuadExt::conj() const {
  QuadExt r = *this;
  r.b_ = -b_;
  return r;
}

Rational QuadExt::norm() const { return a_ * a_ - Rational(d_) * b_ * b_; }

QuadExt QuadExt::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero");
  if (is_rational()) {
    QuadExt r = *this;
    r.a_ = 1 / a_;
    return r;
  }
  Rational n = norm();
  QuadExt r = conj();
  r.a_ /= n;
  r.b_ /= n;
  return r;
}

// sign of a + b sqrt(d): compare a^2 with d b^2 when the signs differ
int QuadExt::sign() const {
  int sa = sgn(a_), sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  int c = cmp(a_ * a_, Rational(d_) * b_ * b_);
  return c == 0 ? 0 : (c > 0 ? sa : sb);
}

double QuadExt::to_double() const {
  if (is_rational()) return mapscale::to_double(a_);
  long bits = 128;
  for (const Rational* q : {&a_, &b_}) {
    bits = std::max<long>(bits, mpz_sizeinbase(q->get_num_mpz_t(), 2) + mpz_sizeinbase(q->get_den_mpz_t(), 2) + 64);
  }
  mpfr_t x, y;
  mpfr_inits2(bits, x, y, (mpfr_ptr)0);
  mpfr_set_ui(y, static_cast<unsigned long>(d_), MPFR_RNDN);
  mpfr_sqrt(y, y, MPFR_RNDN);
  mpfr_mul_q(y, y, b_.get_mpq_t(), MPFR_RNDN);
  mpfr_add_q(x, y, a_.get_mpq_t(), MPFR_RNDN);
  double r = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clears(x, y, (mpfr_ptr)0);
  return r;
}

std::string QuadExt::str() const {
  if (is_rational()) return to_string(a_);
  std::string s = sgn(a_) == 0 ? "" : to_string(a_);
  std::string bs = to_string(b_);
  if (!s.empty() && bs[0] != '-') s += "+";
  return s + bs + "*sqrt(" + std::to_string(d_) + ")";
}

QuadExt QuadExt::sqrt_of(const Rational& q, long d) {
  if (sgn(q) < 0) throw std::domain_error("square root of a negative rational");
  Rational r;
  if (is_perfect_square(q, &r)) return QuadExt(r);
  if (d > 0 && is_perfect_square(q / d, &r)) return QuadExt(Rational(0), r, d);
  throw std::domain_error("square root of " + to_string(q) + " is not in Q(sqrt(" + std::to_string(d) + "))");
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) {
  mpfr_t x;
  mpfr_init2(x, 53);
  mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDN);
  double r = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clear(x);
  return r;
}

Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("not a rational: " + s);
  q.canonicalize();
  return q;
}

bool is_perfect_square(const Rational& q, Rational* root) {
  if (sgn(q) < 0) return false;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) return false;
  if (root) {
    Integer n, m;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(m.get_mpz_t(), q.get_den_mpz_t());
    *root = Rational(n, m);
    root->canonicalize();
  }
  return true;
}

}  // namespace mapscale
