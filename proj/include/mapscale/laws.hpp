#pragma once

#include "mapscale/models.hpp"
#include "mapscale/scaling.hpp"

#include <string>
#include <vector>

namespace mapscale {

enum class Conditioning { FixedN, FixedK };

struct DistributionTable {
  std::string model;
  Conditioning conditioning = Conditioning::FixedN;
  int index = 0;  // n for FixedN, k for FixedK
  int marks = 1;
  std::vector<int> support;
  std::vector<double> prob;
  std::vector<QuadExt> exact;  // exact values of the leading entries
  double alpha = 1.5, D = 1;
  double tail_bound = 0;  // FixedK: bound on the mass beyond the last entry
};

// Pr(X_n = k): root block size in a map of size n
QuadExt prob_X(const ModelDescriptor& m, int n, int k);
// Pr(X2_n = k): size of the block holding the root, in doubly rooted maps
QuadExt prob_X2(const ModelDescriptor& m, int n, int k);
// Pr(Y_k = n): total size given a root block of size k
QuadExt prob_Y(const ModelDescriptor& m, int k, int n);

DistributionTable law_X(const ModelDescriptor& m, int n);
DistributionTable law_X2(const ModelDescriptor& m, int n);
// n_max <= 0 picks max(10 k^alpha, 400); entries with n <= exact_order are exact
DistributionTable law_Y(const ModelDescriptor& m, int k, int n_max = 0, int exact_order = 200);

// asymptotic tail Pr(Y_k > n_max) for large k
double tail_Y(const ModelDescriptor& m, int k, int n_max);

Rational limit_pk_exact(const ModelDescriptor& m, int k);
double limit_pk(const ModelDescriptor& m, int k);

// E[exp(-lambda Y_k)], or E[exp(-lambda Y_k / k^alpha)] when scaled
double laplace_Y(const ModelDescriptor& m, int k, double lambda, bool scaled);

Integer partition_Zp(const ModelDescriptor& m, int p, int k);
QuadExt partition_Ztilde(const ModelDescriptor& m, int p, int n);

enum class RatioMode { Formula, Coefficients };
double ratio_Rp(const ModelDescriptor& m, int p, int n, int k, RatioMode mode);
double ratio_formula(double alpha, double D, int p, double n, double k);
// continuum ratio of dual to direct Liouville partition functions with insertions alpha_i
double lqg_partition_ratio(double gamma, const std::vector<double>& insertions, double D, double A, double A_dual);

struct Window {
  double lo, hi;
};

// rescaled ranges where the exact laws are compared with the limit densities
inline constexpr Window kWindowX{0.5, 4}, kWindowX2{0.2, 4}, kWindowY{0.05, 20};

// sup |n Pr(X_n = k) - tau(k/n^(1/alpha))| over the window
double collapse_X(const ModelDescriptor& m, int n, Window w);
// sup |n^(1/alpha) Pr(X2_n = k) - sigma(k/n^(1/alpha))|
double collapse_X2(const ModelDescriptor& m, int n, Window w);
// sup |k^alpha Pr(Y_k = n) - wp(n/k^alpha)| for n <= n_max
double collapse_Y(const ModelDescriptor& m, int k, int n_max, Window w);

}  // namespace mapscale
