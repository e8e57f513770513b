#pragma once

#include "mapscale/stats.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace mapscale {

// mt19937_64 seeded through splitmix64; stream s of seed k is independent of thread layout
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
  // uniform on the open interval (0, 1)
  double uniform();
  double exponential();

 private:
  std::mt19937_64 gen_;
};

std::uint64_t splitmix64(std::uint64_t& state);

// positive stable variable with E exp(-u S) = exp(-u^beta), 0 < beta < 1
double sample_stable(double beta, Rng& rng);
// mass with E[exp(-u m)] = exp(-D u^(1/alpha) A)
double sample_dual_mass(double A, double D, double alpha, Rng& rng);

// n masses drawn in 20 sub-streams, concatenated in stream order
std::vector<double> sample_dual_masses(double A, double D, double alpha, long n, std::uint64_t seed);

struct McCheck {
  double estimate = 0;
  double se = 0;
  double target = 0;
  double z = 0;
};

inline constexpr int kBatches = 20;

McCheck mc_laplace(const std::vector<double>& masses, double u, double A, double D, double alpha);
// E[m^q] against ((D A)^alpha)^q Gamma(1 - q alpha)/Gamma(1 - q)
McCheck mc_moment(const std::vector<double>& masses, double q, double A, double D, double alpha);
McCheck verify_dual_moments(double q, double A, double D, double alpha, long n_samples, std::uint64_t seed);

// one-sample KS of masses at A = 1 against the wp law
KsResult ks_against_wp(const std::vector<double>& masses, double D, double alpha);

}  // namespace mapscale
