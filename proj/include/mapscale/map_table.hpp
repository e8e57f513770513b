#pragma once

#include "mapscale/models.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace mapscale {

// Exact coefficient table of a block-weighted map model, built one order at a time.
// Holds M, t = g M^s (or g/(1-uM)^2), every power t^k and, for DDSW, the prefactor 1/(1-uM).
// Coefficients are kept as integers of Z or Z[sqrt(d)] scaled by kappa*delta^n at order n.
class MapTable {
 public:
  MapTable(const ModelDescriptor& m, const QuadExt& u, int order);

  static bool has_integral_grading(const ModelDescriptor& m, const QuadExt& u);

  const ModelDescriptor& model() const;
  const QuadExt& u() const;
  int order() const;

  QuadExt M(int n) const;
  QuadExt t(int n) const;
  QuadExt prefactor(int n) const;
  QuadExt tpow(int k, int n) const;
  // [g^n] t^k * prefactor
  QuadExt root(int k, int n) const;
  // weight attached to a root block of size k: u b_k, or b_k for DDSW
  QuadExt block_weight(int k) const;
  // [g^n] sum_k c_k t^k * prefactor, summed exactly before the final division
  QuadExt root_sum(int n, const std::function<Integer(int)>& c) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// shared table at the critical point, grown on demand
std::shared_ptr<const MapTable> critical_table(ModelId id, int order);

// Floating-point companion at u = u_cr in the variable z = g/g_cr, all coefficients bounded.
// Built in O(N^2) from the block polynomial P(t, B(t)) = 0.
class FloatMapTable {
 public:
  FloatMapTable(const ModelDescriptor& m, int order);

  int order() const { return order_; }
  // Pr(Y_k = n) for n = 0..order
  std::vector<double> law_Y(int k) const;
  // g_cr^n [g^n] t and g_cr^n [g^n] M
  const std::vector<double>& t_scaled() const { return t_; }
  const std::vector<double>& M_scaled() const { return M_; }

 private:
  const ModelDescriptor* m_;
  int order_;
  double tc_ = 0;
  std::vector<double> t_, M_, W_;
  double W_cr_ = 1;
};

std::shared_ptr<const FloatMapTable> critical_float_table(ModelId id, int order);

}  // namespace mapscale
