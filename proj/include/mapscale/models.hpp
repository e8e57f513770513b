#pragma once

#include "mapscale/exact.hpp"
#include "mapscale/radical.hpp"
#include "mapscale/series.hpp"

#include <string>
#include <vector>

namespace mapscale {

enum class ModelId { QuadSimpleBlocks, DdswQuartic, BicubicThreeConnected };
enum class SubstitutionKind { PowerTwo, PowerThree, Ddsw };

struct ModelDescriptor {
  ModelId id;
  std::string name;
  Rational alpha;
  CoeffField field;
  SubstitutionKind kind;

  Integer block_count(int k) const;
  long slot_count(int k) const { return 2L * k - 1; }
  int min_block() const { return kind == SubstitutionKind::Ddsw ? 0 : 1; }
};

const ModelDescriptor& model(ModelId id);
const ModelDescriptor& model(const std::string& name);
const std::vector<ModelId>& all_models();

struct CriticalConstants {
  Rational alpha;
  Rational t_cr, B_tcr, Bp_tcr;
  Radical K_B;
  Rational u_cr, g_cr;
  Radical C, D;
};

const CriticalConstants& critical_constants(const ModelDescriptor& m);

// u_cr by the model's alternative closed form in terms of t_cr, g_cr, B'(t_cr)
Rational alternative_u_cr(const ModelDescriptor& m);

const BivariatePoly& bicubic_polynomial();
// P(t, B) = 0 satisfied by the block series, normalized so dP/dB(0, 1) = 1
const BivariatePoly& block_polynomial(const ModelDescriptor& m);
std::vector<Integer> block_counts(const ModelDescriptor& m, int N);

Series block_series_B(const ModelDescriptor& m, int N);
Series map_series_M(const ModelDescriptor& m, const QuadExt& u, int N);
Series root_block_term(const ModelDescriptor& m, const QuadExt& u, int k, int N);

// value of B(t) on [0, t_cr] for the critical model by closed forms
double block_B_numeric(const ModelDescriptor& m, double t);

struct CriticalPoint {
  long double t;
  long double M;
  long double prefactor;  // 1/(1 - u M) for DDSW, 1 otherwise
};

// t(g) and M_cr(g) on the principal branch, 0 <= g <= g_cr
CriticalPoint solve_critical_point(const ModelDescriptor& m, long double g);
double eval_M_numeric(const ModelDescriptor& m, double g);

}  // namespace mapscale
