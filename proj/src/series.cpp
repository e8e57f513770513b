#include "mapscale/series.hpp"

#include "json.hpp"

#include <algorithm>
#include <stdexcept>

namespace mapscale {

namespace {

void check_field(const QuadExt& c, const CoeffField& f) {
  if (!c.is_rational() && (f.kind != CoeffField::Kind::QuadraticExt || c.d() != f.d))
    throw std::invalid_argument("coefficient outside the series field " + f.name());
}

void same_field(const Series& a, const Series& b) {
  if (!(a.field() == b.field())) throw std::invalid_argument("field mismatch: " + a.field().name() + " vs " + b.field().name());
}

}  // namespace

Series::Series(CoeffField field, std::vector<QuadExt> coeffs) : field_(field), c_(std::move(coeffs)) {
  if (c_.empty()) throw std::invalid_argument("series needs at least one coefficient");
  for (auto& c : c_) check_field(c, field_);
}

Series Series::zero(CoeffField field, int order) { return Series(field, std::vector<QuadExt>(order + 1)); }

Series Series::constant(CoeffField field, const QuadExt& c, int order) {
  Series s = zero(field, order);
  check_field(c, field);
  s.c_[0] = c;
  return s;
}

Series Series::variable(CoeffField field, int order) {
  Series s = zero(field, order);
  if (order >= 1) s.c_[1] = 1;
  return s;
}

int Series::valuation() const {
  for (int i = 0; i <= order(); ++i)
    if (!c_[i].is_zero()) return i;
  return order() + 1;
}

Series Series::truncated(int n) const {
  if (n > order()) throw std::out_of_range("cannot extend a truncated series");
  return Series(field_, std::vector<QuadExt>(c_.begin(), c_.begin() + n + 1));
}

Series ps_arith(const Series& a, const Series& b, ArithOp op) {
  same_field(a, b);
  int n = std::min(a.order(), b.order());
  std::vector<QuadExt> r(n + 1);
  switch (op) {
    case ArithOp::add:
      for (int i = 0; i <= n; ++i) r[i] = a[i] + b[i];
      break;
    case ArithOp::sub:
      for (int i = 0; i <= n; ++i) r[i] = a[i] - b[i];
      break;
    case ArithOp::mul: {
      int va = a.valuation(), vb = b.valuation();
      for (int i = va; i <= n; ++i) {
        if (a[i].is_zero()) continue;
        for (int j = vb; i + j <= n; ++j)
          if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
      }
      break;
    }
  }
  return Series(a.field(), std::move(r));
}

Series ps_scale(const Series& a, const QuadExt& c) {
  std::vector<QuadExt> r(a.coeffs());
  for (auto& x : r) x *= c;
  return Series(a.field(), std::move(r));
}

Series ps_pow(const Series& a, long k) {
  if (k < 0) throw std::invalid_argument("negative power");
  Series result = Series::constant(a.field(), 1, a.order());
  Series base = a;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

Series ps_inverse(const Series& a) {
  if (a[0].is_zero()) throw std::domain_error("series with zero constant term is not invertible");
  int n = a.order();
  std::vector<QuadExt> r(n + 1);
  QuadExt inv0 = a[0].inverse();
  r[0] = inv0;
  for (int k = 1; k <= n; ++k) {
    QuadExt s;
    for (int j = 1; j <= k; ++j)
      if (!a[j].is_zero()) s += a[j] * r[k - j];
    r[k] = -(s * inv0);
  }
  return Series(a.field(), std::move(r));
}

Series ps_compose_poly(const std::vector<QuadExt>& outer, const Series& inner) {
  if (!inner[0].is_zero()) throw std::domain_error("inner series must have zero constant term");
  int n = inner.order();
  int top = std::min<int>(static_cast<int>(outer.size()) - 1, n);
  Series acc = Series::zero(inner.field(), n);
  for (int k = top; k >= 0; --k) acc = acc * inner + Series::constant(inner.field(), outer[k], n);
  return acc;
}

Series ps_derivative(const Series& a) {
  int n = a.order();
  std::vector<QuadExt> r(std::max(n, 1));
  for (int i = 1; i <= n; ++i) r[i - 1] = a[i] * QuadExt(static_cast<long>(i));
  return Series(a.field(), std::move(r));
}

Series solve_fixed_point(const std::function<Series(const Series&)>& update, int order, const Series& seed) {
  Series cur = seed.order() >= order ? seed.truncated(order) : seed;
  if (cur.order() < order) {
    std::vector<QuadExt> c(cur.coeffs());
    c.resize(order + 1);
    cur = Series(seed.field(), std::move(c));
  }
  for (int it = 0; it < order + 2; ++it) {
    Series next = update(cur).truncated(order);
    if (next == cur) return cur;
    cur = std::move(next);
  }
  throw std::runtime_error("fixed point did not converge in " + std::to_string(order + 2) + " iterations");
}

BivariatePoly& BivariatePoly::add(int i, int j, const Rational& c) {
  terms[{i, j}] += c;
  return *this;
}

Series BivariatePoly::eval(const Series& B) const {
  int n = B.order();
  Series t = Series::variable(B.field(), n);
  int imax = 0, jmax = 0;
  for (auto& [ij, c] : terms) {
    imax = std::max(imax, ij.first);
    jmax = std::max(jmax, ij.second);
  }
  std::vector<Series> powB{Series::constant(B.field(), 1, n)};
  for (int j = 1; j <= jmax; ++j) powB.push_back(powB.back() * B);
  Series acc = Series::zero(B.field(), n);
  for (int i = imax; i >= 0; --i) {
    Series row = Series::zero(B.field(), n);
    for (auto& [ij, c] : terms)
      if (ij.first == i) row = row + ps_scale(powB[ij.second], QuadExt(c));
    acc = acc * t + row;
  }
  return acc;
}

Series BivariatePoly::eval_dB(const Series& B) const {
  BivariatePoly d;
  for (auto& [ij, c] : terms)
    if (ij.second > 0) d.add(ij.first, ij.second - 1, c * ij.second);
  return d.eval(B);
}

Rational BivariatePoly::eval(const Rational& t, const Rational& b) const {
  Rational s = 0;
  for (auto& [ij, c] : terms) {
    Rational term = c;
    for (int i = 0; i < ij.first; ++i) term *= t;
    for (int j = 0; j < ij.second; ++j) term *= b;
    s += term;
  }
  return s;
}

Rational BivariatePoly::eval_dB(const Rational& t, const Rational& b) const {
  BivariatePoly d;
  for (auto& [ij, c] : terms)
    if (ij.second > 0) d.add(ij.first, ij.second - 1, c * ij.second);
  return d.eval(t, b);
}

Rational BivariatePoly::eval_dt(const Rational& t, const Rational& b) const {
  BivariatePoly d;
  for (auto& [ij, c] : terms)
    if (ij.first > 0) d.add(ij.first - 1, ij.second, c * ij.first);
  return d.eval(t, b);
}

Series newton_algebraic(const BivariatePoly& P, int order, const Rational& branch_seed) {
  if (P.eval(Rational(0), branch_seed) != 0) throw std::domain_error("seed is not a root of P(0, B)");
  if (P.eval_dB(Rational(0), branch_seed) == 0) throw std::domain_error("singular branch: dP/dB vanishes at the seed");
  CoeffField f = CoeffField::rational();
  Series B = Series::constant(f, QuadExt(branch_seed), 0);
  int prec = 0;
  while (prec < order) {
    prec = std::min(order, 2 * prec + 1);
    std::vector<QuadExt> c(B.coeffs());
    c.resize(prec + 1);
    B = Series(f, std::move(c));
    B = B - P.eval(B) * ps_inverse(P.eval_dB(B));
  }
  return B;
}

std::string to_json(const Series& s) {
  nlohmann::ordered_json j;
  j["field"] = s.field().name();
  j["order"] = s.order();
  auto arr = nlohmann::ordered_json::array();
  bool quad = s.field().kind == CoeffField::Kind::QuadraticExt;
  for (auto& c : s.coeffs()) {
    if (quad)
      arr.push_back({to_string(c.a()), to_string(c.b())});
    else
      arr.push_back(to_string(c.a()));
  }
  j["coeffs"] = arr;
  return j.dump();
}

}  // namespace mapscale
