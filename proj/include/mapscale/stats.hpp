#pragma once

#include <cstdint>
#include <vector>

namespace mapscale {

struct BatchEstimate {
  double mean = 0;
  double se = 0;
  int batches = 0;
};

// mean of per-batch means and its standard error over equal contiguous batches
BatchEstimate batch_means(const std::vector<double>& values, int batches = 20);

// Kolmogorov survival function Q(lambda) = 2 sum (-1)^(j-1) exp(-2 j^2 lambda^2)
double kolmogorov_q(double lambda);

struct KsResult {
  double statistic = 0;
  double p_value = 1;
};

// sample sorted ascending, cdf evaluated at each sample point
KsResult ks_one_sample(const std::vector<double>& sorted_sample, const std::vector<double>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// worker count from MAPSCALE_THREADS, defaulting to the hardware concurrency
int thread_count();

}  // namespace mapscale
