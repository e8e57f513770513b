#include "mapscale/scaling.hpp"

#include "mapscale/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace mapscale {

namespace {

constexpr double kPi = std::numbers::pi;

void check_alpha(double alpha) {
  if (!(alpha > 1 && alpha < 2)) throw std::domain_error("alpha must lie in (1, 2)");
}

bool is_three_halves(double alpha) { return std::fabs(alpha - 1.5) < 1e-15; }

double log_term(double alpha, double x, int m) {
  return m * std::log(x) + std::lgamma(1 + m / alpha) - std::lgamma(m + 1.0);
}

double log_asymptotic(double alpha, double x) {
  double e = alpha / (alpha - 1);
  double y = x / alpha;
  return 0.5 * std::log(alpha / (2 * kPi * (alpha - 1))) + e / 2 * std::log(y) - (alpha - 1) * std::pow(y, e);
}

struct Mpfr {
  mpfr_t v;
  explicit Mpfr(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

}  // namespace

ScalingParams::ScalingParams(double a, double d) : alpha(a), D(d) {
  check_alpha(alpha);
  if (!(D > 0)) throw std::domain_error("D must be positive");
}

ScalingParams ScalingParams::of(const ModelDescriptor& m) {
  const CriticalConstants& c = critical_constants(m);
  return ScalingParams(to_double(c.alpha), c.D.to_double());
}

SeriesValue wright_S_series(double alpha, double x, double tol, int max_terms) {
  check_alpha(alpha);
  if (x < 0) throw std::domain_error("x must be nonnegative");
  SeriesValue r;
  if (x == 0) return r;
  double peak = -INFINITY;
  int m_peak = 1;
  bool decays = false;
  for (int m = 1; m <= max_terms; ++m) {
    double l = log_term(alpha, x, m);
    if (l > peak) {
      peak = l;
      m_peak = m;
    } else if (l < peak - 50) {
      decays = true;
      break;
    }
  }
  if (!decays) {
    r.value = std::nan("");
    r.terms = max_terms;
    r.converged = false;
    return r;
  }
  double first = log_term(alpha, x, 1) + std::log(std::fabs(std::sin(kPi / alpha)) / kPi);
  double est = std::min(first, log_asymptotic(alpha, x));
  double loss = std::max(0.0, (peak - est) / std::log(2.0));
  mpfr_prec_t prec = static_cast<mpfr_prec_t>(80 + loss);

  Mpfr sum(prec), term(prec), lx(prec), tmp(prec), ang(prec), pi(prec), s(prec);
  mpfr_set_zero(sum.v, 1);
  mpfr_set_d(lx.v, x, MPFR_RNDN);
  mpfr_log(lx.v, lx.v, MPFR_RNDN);
  mpfr_const_pi(pi.v, MPFR_RNDN);
  Mpfr inv_alpha(prec);
  mpfr_set_d(inv_alpha.v, alpha, MPFR_RNDN);
  mpfr_ui_div(inv_alpha.v, 1, inv_alpha.v, MPFR_RNDN);
  int small = 0;
  int m = 1;
  for (; m <= max_terms; ++m) {
    // log(x^m Gamma(1+m/alpha)/m!)
    mpfr_mul_ui(tmp.v, inv_alpha.v, m, MPFR_RNDN);
    mpfr_add_ui(tmp.v, tmp.v, 1, MPFR_RNDN);
    mpfr_lngamma(term.v, tmp.v, MPFR_RNDN);
    mpfr_set_ui(tmp.v, m + 1, MPFR_RNDN);
    mpfr_lngamma(tmp.v, tmp.v, MPFR_RNDN);
    mpfr_sub(term.v, term.v, tmp.v, MPFR_RNDN);
    mpfr_mul_ui(tmp.v, lx.v, m, MPFR_RNDN);
    mpfr_add(term.v, term.v, tmp.v, MPFR_RNDN);
    mpfr_exp(term.v, term.v, MPFR_RNDN);
    mpfr_mul_ui(ang.v, inv_alpha.v, m, MPFR_RNDN);
    mpfr_mul(ang.v, ang.v, pi.v, MPFR_RNDN);
    mpfr_sin(s.v, ang.v, MPFR_RNDN);
    mpfr_mul(term.v, term.v, s.v, MPFR_RNDN);
    if (m % 2 == 0) mpfr_neg(term.v, term.v, MPFR_RNDN);
    mpfr_add(sum.v, sum.v, term.v, MPFR_RNDN);
    if (m > m_peak) {
      double t = std::fabs(mpfr_get_d(term.v, MPFR_RNDN));
      double v = std::fabs(mpfr_get_d(sum.v, MPFR_RNDN));
      small = t <= tol * v ? small + 1 : 0;
      if (small >= 3) break;
    }
  }
  mpfr_div(sum.v, sum.v, pi.v, MPFR_RNDN);
  r.value = mpfr_get_d(sum.v, MPFR_RNDN);
  r.terms = std::min(m, max_terms);
  r.converged = m <= max_terms;
  return r;
}

double wright_S_integral(double alpha, double x, double tol) {
  check_alpha(alpha);
  if (x < 0) throw std::domain_error("x must be nonnegative");
  if (x == 0) return 0;
  using cd = std::complex<double>;
  double nu = 1 / alpha;
  double saddle = std::pow(x / alpha, alpha / (alpha - 1));
  double c = std::max(saddle, 1.0);
  double phi0 = c - x * std::pow(c, nu);
  auto f = [&](double u) {
    cd w(1, u);
    cd sigma = c * w * w;
    cd phi = sigma - x * std::pow(sigma, nu) - phi0;
    if (phi.real() < -745) return 0.0;
    return (std::exp(phi) * w).real();
  };
  double span = std::sqrt(800 / ((1 - nu) * c));
  double v = integrate(f, 0, span, tol);
  return 2 * c / kPi * std::exp(phi0) * v;
}

double wright_S_airy(double x) {
  if (x < 0) throw std::domain_error("x must be nonnegative");
  if (x == 0) return 0;
  double s = x / std::cbrt(9.0);
  double z = s * s;
  double ai, aip;
  if (z < 1) {
    // Maclaurin series; the Bessel route loses its continued fraction near 0
    const double c1 = 1 / (std::cbrt(9.0) * std::tgamma(2.0 / 3)), c2 = 1 / (std::cbrt(3.0) * std::tgamma(1.0 / 3));
    double f = 1, g = z, fp = 0, gp = 1, tf = 1, tg = z, z3 = z * z * z;
    for (int k = 1; k < 30 && z3 > 0; ++k) {
      tf *= z3 / ((3 * k - 1) * (3.0 * k));
      tg *= z3 / ((3.0 * k) * (3 * k + 1));
      f += tf;
      g += tg;
      fp += tf * 3 * k / z;
      gp += tg * (3 * k + 1) / z;
      if (tf < 1e-18 * f && tg <= 1e-18 * g) break;
    }
    ai = c1 * f - c2 * g;
    aip = c1 * fp - c2 * gp;
  } else {
    ai = boost::math::airy_ai(z);
    aip = boost::math::airy_ai_prime(z);
  }
  return 2 * s * std::exp(-2 * x * x * x / 27) * (s * ai - aip);
}

double wright_S_asymptotic(double alpha, double x) {
  check_alpha(alpha);
  if (x <= 0) return 0;
  return std::exp(log_asymptotic(alpha, x));
}

double wright_S(double alpha, double x, WrightMethod method) {
  switch (method) {
    case WrightMethod::Series:
      return wright_S_series(alpha, x).value;
    case WrightMethod::Integral:
      return wright_S_integral(alpha, x);
    case WrightMethod::Airy:
      if (!is_three_halves(alpha)) throw std::domain_error("Airy form needs alpha = 3/2");
      return wright_S_airy(x);
    case WrightMethod::Best:
      break;
  }
  if (x > 1 && log_asymptotic(alpha, x) < -800) return 0;
  if (is_three_halves(alpha)) return wright_S_airy(x);
  if (x <= 1) return wright_S_series(alpha, x).value;
  return wright_S_integral(alpha, x);
}

double density_tau(const ScalingParams& p, double x) {
  if (!(x > 0)) throw std::domain_error("x must be positive");
  double a = p.alpha, z = p.D * x;
  double pref = a * a * a * std::tgamma(2 - 1 / a) / std::tgamma(2 - a);
  return pref * wright_S(a, z) / z * std::pow(z, -a);
}

double density_sigma(const ScalingParams& p, double x) {
  if (!(x > 0)) throw std::domain_error("x must be positive");
  double a = p.alpha, z = p.D * x;
  double pref = a * std::tgamma(1 / a) / std::tgamma(2 - a);
  return pref * p.D * wright_S(a, z) / z * std::pow(z, 1 - a);
}

double density_wp(const ScalingParams& p, double y) {
  if (!(y > 0)) throw std::domain_error("y must be positive");
  return wright_S(p.alpha, p.D / std::pow(y, 1 / p.alpha)) / y;
}

double moment_S(double alpha, double s) {
  check_alpha(alpha);
  if (s <= -2) throw std::domain_error("moment of S needs s > -2");
  // Gamma(a)/Gamma(a/alpha) with the removable pole at a = 0 divided out
  double a = s + 1;
  return std::tgamma(1 + a) / (alpha * std::tgamma(1 + a / alpha));
}

double sigma_moment(const ScalingParams& p, double power) {
  double a = p.alpha;
  return a * std::tgamma(1 / a) / std::tgamma(2 - a) * std::pow(p.D, -power) * moment_S(a, power - a);
}

std::vector<double> wp_cdf_sorted(const ScalingParams& p, const std::vector<double>& ys) {
  // F(y) = alpha int_{D y^(-1/alpha)}^oo S(z)/z dz; z decreases as y grows
  const double a = p.alpha;
  auto g = [&](double z) { return z <= 0 ? 0.0 : a * wright_S(a, z) / z; };
  std::vector<double> out(ys.size());
  double acc = 0, z_prev = kInf;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (i && ys[i] < ys[i - 1]) throw std::invalid_argument("sample must be ascending");
    if (!(ys[i] > 0)) {
      out[i] = 0;
      continue;
    }
    double z = p.D / std::pow(ys[i], 1 / a);
    if (z < z_prev) {
      if (std::isinf(z_prev))
        acc += integrate(g, z, kInf, 1e-13);
      else if (z_prev - z < 0.05 * std::max(z, 1.0))
        acc += boost::math::quadrature::gauss<double, 30>::integrate(g, z, z_prev);
      else
        acc += integrate(g, z, z_prev, 1e-13);
    }
    z_prev = z;
    out[i] = std::min(1.0, acc);
  }
  return out;
}

double wp_cdf(const ScalingParams& p, double y) { return wp_cdf_sorted(p, {y})[0]; }

}  // namespace mapscale
