#pragma once

#include "mapscale/exact.hpp"
#include "mapscale/quadrature.hpp"

#include <string>
#include <utility>
#include <vector>

namespace mapscale {

enum class SpectrumKind { LqExpected, LqAlmostSure, DimExpected, DimAlmostSure, QuantumBallLq, QuantumBallDim };

struct SpectrumCurve {
  SpectrumKind kind;
  double gamma;  // gamma < 2, or the dual gamma' > 2
  std::vector<std::pair<double, double>> samples;
  double lo, hi;                   // sampled range
  std::vector<double> boundaries;  // piece boundaries inside the validity range
};

// gamma' = 4/gamma
double dual_gamma(double gamma);
// alpha = 4/gamma^2, or gamma'^2/4 on the dual side
double lqg_alpha(double gamma);
double Q_gamma(double gamma);
double a_gamma(double gamma);

double xi(double gamma, double q);
double tau_expected(double gamma, double q);
double f_expected(double gamma, double beta);

double f_as(double gamma, double beta);
double tau_as(double gamma, double q);
double f_as_dual(double gamma_prime, double beta);
double tau_as_dual(double gamma_prime, double q);

double kpz_delta(double gamma, double q);
double kpz_inverse(double gamma, double delta);

double qball_f_expected(double gamma, double beta);
double qball_f(double gamma, double beta);
double qball_tau(double gamma, double q);

// beta range [2/(2+g)^2, 2/(2-g)^2] and q range [-(2-g)^2/g, (2+g)^2/g]
std::pair<double, double> qball_beta_range(double gamma);
std::pair<double, double> qball_q_range(double gamma);

// gamma_S below criticality and at the dual point
Rational string_susceptibility(const Rational& alpha);
Rational string_susceptibility_dual(const Rational& alpha);

SpectrumCurve spectrum(SpectrumKind kind, double gamma, double lo, double hi, int steps);
// tau and f pair of the quantum balls
std::pair<SpectrumCurve, SpectrumCurve> quantum_ball_spectra(double gamma, int steps = 400);

struct LegendreResult {
  std::vector<double> values;
  bool concave = true;  // input passed a discrete concavity check
};

// inf over x in [grid.front(), grid.back()] of s x - g(x), for every slope s;
// grid minimum refined by Brent's method on the neighbouring cells
LegendreResult legendre_numeric(const RealFn& g, const std::vector<double>& grid, const std::vector<double>& slopes);

// uniform grid with the given breakpoints inserted
std::vector<double> legendre_grid(double lo, double hi, int points, const std::vector<double>& breaks = {});

}  // namespace mapscale
