#include "mapscale/dualmeasure.hpp"

#include "mapscale/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace mapscale {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  std::seed_seq seq{splitmix64(s), splitmix64(s), splitmix64(s), splitmix64(s)};
  gen_.seed(seq);
}

double Rng::uniform() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

double Rng::exponential() { return -std::log(uniform()); }

double sample_stable(double beta, Rng& rng) {
  if (!(beta > 0 && beta < 1)) throw std::domain_error("beta must lie in (0, 1)");
  double u = std::numbers::pi * rng.uniform();
  double e = rng.exponential();
  double a = std::sin(beta * u) / std::pow(std::sin(u), 1 / beta);
  double b = std::pow(std::sin((1 - beta) * u) / e, (1 - beta) / beta);
  return a * b;
}

double sample_dual_mass(double A, double D, double alpha, Rng& rng) {
  if (!(A > 0 && D > 0)) throw std::domain_error("A and D must be positive");
  if (!(alpha > 1 && alpha < 2)) throw std::domain_error("alpha must lie in (1, 2)");
  return std::pow(D * A, alpha) * sample_stable(1 / alpha, rng);
}

std::vector<double> sample_dual_masses(double A, double D, double alpha, long n, std::uint64_t seed) {
  if (n < kBatches) throw std::invalid_argument("need at least one sample per stream");
  std::vector<double> out(n);
  int workers = std::min(thread_count(), kBatches);
  auto run = [&](int w) {
    for (int s = w; s < kBatches; s += workers) {
      long lo = n * s / kBatches, hi = n * (s + 1) / kBatches;
      Rng rng(seed, s);
      for (long i = lo; i < hi; ++i) out[i] = sample_dual_mass(A, D, alpha, rng);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  return out;
}

namespace {

McCheck check(const std::vector<double>& vals, double target) {
  BatchEstimate b = batch_means(vals, kBatches);
  McCheck c{b.mean, b.se, target, 0};
  c.z = b.se > 0 ? (b.mean - target) / b.se : (b.mean == target ? 0 : INFINITY);
  return c;
}

}  // namespace

McCheck mc_laplace(const std::vector<double>& masses, double u, double A, double D, double alpha) {
  if (u < 0) throw std::domain_error("u must be nonnegative");
  std::vector<double> v(masses.size());
  std::transform(masses.begin(), masses.end(), v.begin(), [&](double m) { return std::exp(-u * m); });
  return check(v, std::exp(-D * std::pow(u, 1 / alpha) * A));
}

McCheck mc_moment(const std::vector<double>& masses, double q, double A, double D, double alpha) {
  if (!(q < 1 / alpha)) throw std::domain_error("q must be below 1/alpha");
  std::vector<double> v(masses.size());
  std::transform(masses.begin(), masses.end(), v.begin(), [&](double m) { return std::pow(m, q); });
  double target = std::pow(std::pow(D * A, alpha), q) * std::tgamma(1 - q * alpha) / std::tgamma(1 - q);
  return check(v, target);
}

McCheck verify_dual_moments(double q, double A, double D, double alpha, long n_samples, std::uint64_t seed) {
  if (!(q < 1 / alpha)) throw std::domain_error("q must be below 1/alpha");
  return mc_moment(sample_dual_masses(A, D, alpha, n_samples, seed), q, A, D, alpha);
}

KsResult ks_against_wp(const std::vector<double>& masses, double D, double alpha) {
  std::vector<double> s = masses;
  std::sort(s.begin(), s.end());
  return ks_one_sample(s, wp_cdf_sorted(ScalingParams(alpha, D), s));
}

}  // namespace mapscale
