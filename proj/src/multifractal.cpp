#include "mapscale/multifractal.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mapscale {

namespace {

void check_gamma(double g) {
  if (!(g > 0) || g == 2) throw std::domain_error("gamma must be positive and different from 2");
}
void check_below(double g) {
  if (!(g > 0 && g < 2)) throw std::domain_error("gamma must lie in (0, 2)");
}
void check_above(double g) {
  if (!(g > 2)) throw std::domain_error("gamma' must exceed 2");
}

double sq(double x) { return x * x; }

}  // namespace

double dual_gamma(double gamma) {
  check_gamma(gamma);
  return 4 / gamma;
}

double lqg_alpha(double gamma) {
  check_gamma(gamma);
  return gamma < 2 ? 4 / sq(gamma) : sq(gamma) / 4;
}

double Q_gamma(double gamma) { return 2 / gamma + gamma / 2; }
double a_gamma(double gamma) { return 2 / gamma - gamma / 2; }

double xi(double gamma, double q) {
  check_gamma(gamma);
  if (!(q < 4 / sq(gamma))) throw std::domain_error("moment of order q is infinite");
  double g2 = sq(gamma) / 2;
  return (2 + g2) * q - g2 * q * q;
}

double tau_expected(double gamma, double q) { return xi(gamma, q) - 2; }

double f_expected(double gamma, double beta) {
  check_gamma(gamma);
  if (beta < 0) throw std::domain_error("beta must be nonnegative");
  double g2 = sq(gamma);
  if (gamma > 2 && beta <= g2 / 2 - 2) return 4 * beta / g2;
  return 2 - sq(2 + g2 / 2 - beta) / (2 * g2);
}

double f_as(double gamma, double beta) {
  check_below(gamma);
  if (beta < 0) throw std::domain_error("beta must be nonnegative");
  if (beta < sq(2 - gamma) / 2 || beta > sq(2 + gamma) / 2) return 0;
  return f_expected(gamma, beta);
}

double tau_as(double gamma, double q) {
  check_below(gamma);
  if (q <= -2 / gamma) return sq(2 + gamma) / 2 * q;
  if (q >= 2 / gamma) return sq(2 - gamma) / 2 * q;
  return xi(gamma, q) - 2;
}

double f_as_dual(double gp, double beta) {
  check_above(gp);
  if (beta < 0) throw std::domain_error("beta must be nonnegative");
  if (beta > sq(2 + gp) / 2) return 0;
  return f_expected(gp, beta);
}

double tau_as_dual(double gp, double q) {
  check_above(gp);
  if (q <= -2 / gp) return sq(2 + gp) / 2 * q;
  if (q >= 4 / sq(gp)) return 0;
  return xi(gp, q) - 2;
}

double kpz_delta(double gamma, double q) {
  check_gamma(gamma);
  double a = a_gamma(gamma);
  double s = 2 * q + a * a;
  if (s < 0) throw std::domain_error("2q below -a^2");
  return (std::sqrt(s) - a) / gamma;
}

double kpz_inverse(double gamma, double delta) {
  check_gamma(gamma);
  double g2 = sq(gamma) / 2;
  return g2 * delta * delta + (2 - g2) * delta;
}

std::pair<double, double> qball_beta_range(double gamma) {
  check_gamma(gamma);
  return {2 / sq(2 + gamma), 2 / sq(2 - gamma)};
}

std::pair<double, double> qball_q_range(double gamma) {
  check_gamma(gamma);
  return {-sq(2 - gamma) / gamma, sq(2 + gamma) / gamma};
}

double qball_f_expected(double gamma, double beta) {
  check_gamma(gamma);
  if (!(beta > 0)) throw std::domain_error("beta must be positive");
  double a = a_gamma(gamma);
  return 1 + a / gamma - a * a * beta / 2 - 1 / (2 * sq(gamma) * beta);
}

double qball_f(double gamma, double beta) {
  auto [lo, hi] = qball_beta_range(gamma);
  if (beta < lo || beta > hi) return 0;
  return qball_f_expected(gamma, beta);
}

double qball_tau(double gamma, double q) {
  auto [lo, hi] = qball_q_range(gamma);
  auto [blo, bhi] = qball_beta_range(gamma);
  if (q <= lo) return bhi * q;
  if (q >= hi) return blo * q;
  return kpz_delta(gamma, q) - 1;
}

Rational string_susceptibility(const Rational& alpha) { return Rational(1) - alpha; }
Rational string_susceptibility_dual(const Rational& alpha) { return Rational(1) - Rational(1) / alpha; }

SpectrumCurve spectrum(SpectrumKind kind, double gamma, double lo, double hi, int steps) {
  check_gamma(gamma);
  if (steps < 1 || !(hi > lo)) throw std::invalid_argument("bad sampling range");
  bool dual = gamma > 2;
  SpectrumCurve c{kind, gamma, {}, lo, hi, {}};
  std::function<double(double)> f;
  double g2 = sq(gamma);
  switch (kind) {
    case SpectrumKind::LqExpected:
      f = [=](double q) { return tau_expected(gamma, q); };
      c.hi = std::min(hi, std::nextafter(dual ? 4 / g2 : 4 / g2, -kInf));
      break;
    case SpectrumKind::LqAlmostSure:
      f = [=](double q) { return dual ? tau_as_dual(gamma, q) : tau_as(gamma, q); };
      c.boundaries = dual ? std::vector<double>{-2 / gamma, 4 / g2} : std::vector<double>{-2 / gamma, 2 / gamma};
      break;
    case SpectrumKind::DimExpected:
      f = [=](double b) { return f_expected(gamma, b); };
      c.lo = std::max(lo, 0.0);
      if (dual) c.boundaries = {g2 / 2 - 2};
      break;
    case SpectrumKind::DimAlmostSure:
      f = [=](double b) { return dual ? f_as_dual(gamma, b) : f_as(gamma, b); };
      c.lo = std::max(lo, 0.0);
      c.boundaries = dual ? std::vector<double>{g2 / 2 - 2, sq(2 + gamma) / 2}
                          : std::vector<double>{sq(2 - gamma) / 2, sq(2 + gamma) / 2};
      break;
    case SpectrumKind::QuantumBallLq: {
      f = [=](double q) { return qball_tau(gamma, q); };
      auto r = qball_q_range(gamma);
      c.boundaries = {r.first, r.second};
      break;
    }
    case SpectrumKind::QuantumBallDim: {
      f = [=](double b) { return qball_f(gamma, b); };
      c.lo = std::max(lo, 0.0);
      auto r = qball_beta_range(gamma);
      c.boundaries = {r.first, r.second};
      break;
    }
  }
  if (!(c.hi > c.lo)) throw std::invalid_argument("empty sampling range");
  std::erase_if(c.boundaries, [&](double b) { return b < c.lo || b > c.hi; });
  c.samples.reserve(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    double x = i == steps ? c.hi : c.lo + (c.hi - c.lo) * i / steps;
    if (kind == SpectrumKind::QuantumBallDim && x == 0) {
      c.samples.emplace_back(x, 0.0);
      continue;
    }
    c.samples.emplace_back(x, f(x));
  }
  return c;
}

std::pair<SpectrumCurve, SpectrumCurve> quantum_ball_spectra(double gamma, int steps) {
  auto [qlo, qhi] = qball_q_range(gamma);
  auto [blo, bhi] = qball_beta_range(gamma);
  double qw = qhi - qlo, bw = bhi - blo;
  return {spectrum(SpectrumKind::QuantumBallLq, gamma, qlo - qw / 2, qhi + qw / 2, steps),
          spectrum(SpectrumKind::QuantumBallDim, gamma, std::max(0.0, blo - bw / 2), bhi + bw / 2, steps)};
}

std::vector<double> legendre_grid(double lo, double hi, int points, const std::vector<double>& breaks) {
  if (points < 3 || !(hi > lo)) throw std::invalid_argument("bad grid");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
  for (double b : breaks)
    if (b > lo && b < hi) g.push_back(b);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

LegendreResult legendre_numeric(const RealFn& g, const std::vector<double>& grid, const std::vector<double>& slopes) {
  if (grid.size() < 3) throw std::invalid_argument("grid too small");
  LegendreResult r;
  std::vector<double> gv(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) gv[i] = g(grid[i]);
  for (size_t i = 1; i + 1 < grid.size(); ++i) {
    double h0 = grid[i] - grid[i - 1], h1 = grid[i + 1] - grid[i];
    double curv = (gv[i + 1] - gv[i]) / h1 - (gv[i] - gv[i - 1]) / h0;
    if (curv > 1e-9 * (1 + std::fabs(gv[i]))) r.concave = false;
  }
  r.values.reserve(slopes.size());
  for (double s : slopes) {
    size_t best = 0;
    double bv = kInf;
    for (size_t i = 0; i < grid.size(); ++i) {
      double v = s * grid[i] - gv[i];
      if (v < bv) bv = v, best = i;
    }
    double a = grid[best > 0 ? best - 1 : 0], b = grid[std::min(best + 1, grid.size() - 1)];
    auto h = [&](double x) { return s * x - g(x); };
    auto m = boost::math::tools::brent_find_minima(h, a, b, 52);
    r.values.push_back(std::min(bv, m.second));
  }
  return r;
}

}  // namespace mapscale
