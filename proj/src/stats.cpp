#include "mapscale/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace mapscale {

BatchEstimate batch_means(const std::vector<double>& values, int batches) {
  if (batches < 2 || values.size() < static_cast<size_t>(batches)) throw std::invalid_argument("too few samples for batch means");
  size_t per = values.size() / batches;
  std::vector<double> m(batches, 0.0);
  for (int b = 0; b < batches; ++b) {
    double s = 0;
    for (size_t i = b * per; i < (b + 1) * per; ++i) s += values[i];
    m[b] = s / per;
  }
  BatchEstimate r;
  r.batches = batches;
  for (double x : m) r.mean += x;
  r.mean /= batches;
  double v = 0;
  for (double x : m) v += (x - r.mean) * (x - r.mean);
  r.se = std::sqrt(v / (batches - 1) / batches);
  return r;
}

double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1;
  double sum = 0, sign = 1;
  for (int j = 1; j <= 200; ++j) {
    double t = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * t;
    sign = -sign;
    if (t < 1e-17 * sum) break;
  }
  return std::clamp(2 * sum, 0.0, 1.0);
}

namespace {

double p_value(double d, double ne) {
  double s = std::sqrt(ne);
  return kolmogorov_q((s + 0.12 + 0.11 / s) * d);
}

}  // namespace

KsResult ks_one_sample(const std::vector<double>& x, const std::vector<double>& cdf) {
  if (x.empty() || x.size() != cdf.size()) throw std::invalid_argument("sample and cdf sizes differ");
  double n = static_cast<double>(x.size()), d = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    d = std::max(d, std::fabs((i + 1) / n - cdf[i]));
    d = std::max(d, std::fabs(cdf[i] - i / n));
  }
  return {d, p_value(d, n)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size()), d = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(i / na - j / nb));
  }
  return {d, p_value(d, na * nb / (na + nb))};
}

int thread_count() {
  if (const char* e = std::getenv("MAPSCALE_THREADS")) {
    try {
      int n = std::stoi(e);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace mapscale
