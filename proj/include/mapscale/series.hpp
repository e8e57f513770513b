#pragma once

#include "mapscale/exact.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mapscale {

// Truncated power series c_0 + c_1 g + ... + c_N g^N with exact coefficients.
class Series {
 public:
  Series() = default;
  Series(CoeffField field, std::vector<QuadExt> coeffs);

  static Series zero(CoeffField field, int order);
  static Series constant(CoeffField field, const QuadExt& c, int order);
  static Series variable(CoeffField field, int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const CoeffField& field() const { return field_; }
  const QuadExt& operator[](int i) const { return c_[i]; }
  const std::vector<QuadExt>& coeffs() const { return c_; }
  int valuation() const;

  Series truncated(int order) const;
  bool operator==(const Series& o) const { return field_ == o.field_ && c_ == o.c_; }

 private:
  CoeffField field_;
  std::vector<QuadExt> c_;
};

enum class ArithOp { add, sub, mul };

Series ps_arith(const Series& a, const Series& b, ArithOp op);
Series ps_scale(const Series& a, const QuadExt& c);
Series ps_pow(const Series& a, long k);
Series ps_inverse(const Series& a);
Series ps_compose_poly(const std::vector<QuadExt>& outer, const Series& inner);
Series ps_derivative(const Series& a);

inline Series operator+(const Series& a, const Series& b) { return ps_arith(a, b, ArithOp::add); }
inline Series operator-(const Series& a, const Series& b) { return ps_arith(a, b, ArithOp::sub); }
inline Series operator*(const Series& a, const Series& b) { return ps_arith(a, b, ArithOp::mul); }

Series solve_fixed_point(const std::function<Series(const Series&)>& update, int order, const Series& seed);

// P(t, B) = sum c_{ij} t^i B^j
struct BivariatePoly {
  std::map<std::pair<int, int>, Rational> terms;

  BivariatePoly& add(int i, int j, const Rational& c);
  Series eval(const Series& B) const;
  Series eval_dB(const Series& B) const;
  Rational eval(const Rational& t, const Rational& b) const;
  Rational eval_dB(const Rational& t, const Rational& b) const;
  Rational eval_dt(const Rational& t, const Rational& b) const;
};

Series newton_algebraic(const BivariatePoly& P, int order, const Rational& branch_seed);

std::string to_json(const Series& s);

}  // namespace mapscale
