#pragma once

#include "mapscale/models.hpp"

#include <vector>

namespace mapscale {

struct ScalingParams {
  double alpha;
  double D;

  ScalingParams(double alpha, double D);
  static ScalingParams of(const ModelDescriptor& m);
};

struct SeriesValue {
  double value = 0;
  int terms = 0;
  bool converged = true;
};

enum class WrightMethod { Series, Integral, Airy, Best };

// S_{1/alpha}(x) = (1/pi) sum_{m>=1} (-1)^(m-1) x^m Gamma(1+m/alpha) sin(pi m/alpha)/m!
// summed in multiprecision sized to the cancellation
SeriesValue wright_S_series(double alpha, double x, double tol = 1e-16, int max_terms = 20000);
// Hankel-contour integral along a parabola through the saddle point
double wright_S_integral(double alpha, double x, double tol = 1e-12);
// alpha = 3/2 closed form through Ai and Ai'
double wright_S_airy(double x);
double wright_S_asymptotic(double alpha, double x);
double wright_S(double alpha, double x, WrightMethod method = WrightMethod::Best);

double density_tau(const ScalingParams& p, double x);
double density_sigma(const ScalingParams& p, double x);
double density_wp(const ScalingParams& p, double y);

// int_0^oo x^s S(x) dx
double moment_S(double alpha, double s);
// E_sigma[x^p]
double sigma_moment(const ScalingParams& p, double power);

double wp_cdf(const ScalingParams& p, double y);
// cdf at every point of an ascending sample, integrated piecewise
std::vector<double> wp_cdf_sorted(const ScalingParams& p, const std::vector<double>& ys);

}  // namespace mapscale
