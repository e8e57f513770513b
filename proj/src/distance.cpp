#include "mapscale/distance.hpp"

#include "mapscale/scaling.hpp"

#include <boost/math/interpolators/cubic_hermite.hpp>

#include <boost/math/special_functions/bernoulli.hpp>

#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mapscale {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr int kLaurentTerms = 26;

// cosh w / sinh^3 w = sum_n a_n w^(2n-3)
const std::array<double, kLaurentTerms>& laurent() {
  static const auto a = [] {
    std::array<double, kLaurentTerms> c{};
    double fact = 1;
    for (int n = 0; n < kLaurentTerms; ++n) {
      if (n > 0) fact *= (2.0 * n - 1) * (2.0 * n);
      c[n] = (2.0 * n - 1) * (2.0 * n - 2) * std::ldexp(1.0, 2 * n - 1) *
             boost::math::bernoulli_b2n<double>(n) / fact;
    }
    return c;
  }();
  return a;
}

cplx G(cplx w) {
  if (std::abs(w) < 1) {
    const auto& a = laurent();
    cplx w2 = w * w, p = 1.0 / (w2 * w), s = 0;
    for (int n = 0; n < kLaurentTerms; ++n, p *= w2) s += a[n] * p;
    return s;
  }
  if (w.real() < 0) return -G(-w);
  cplx e = std::exp(-2.0 * w);
  cplx q = 1.0 - e;
  return 4.0 * e * (1.0 + e) / (q * q * q);
}

// Re[e^(i m0 pi/q) F'(e^(i pi/q) s)] for s > 0; the small-s series is summed with exact phases
double rotated_real(double s, int q, int m0) {
  const double om = ProfileParams::quad().omega;
  double w = om * s;
  if (w < 1) {
    const auto& a = laurent();
    double w2 = w * w, p = 1.0 / (w2 * w), sum = 0;
    for (int n = 0; n < kLaurentTerms; ++n, p *= w2) {
      int j = ((m0 + 2 * n - 3) % (2 * q) + 2 * q) % (2 * q);
      if (2 * j == q || 2 * j == 3 * q) continue;
      sum += a[n] * p * std::cos(j * kPi / q);
    }
    return -4 * om * om * om * sum;
  }
  cplx ph = std::polar(1.0, kPi / q);
  return (std::polar(1.0, m0 * kPi / q) * F_prime(ph * s)).real();
}

void check_r(double r) {
  if (!(r >= 1e-4)) throw std::domain_error("r must be at least 1e-4");
}

}  // namespace

ProfileParams ProfileParams::quad() {
  return {std::pow(3.0, 0.25) / std::sqrt(2.0), 3 / std::cbrt(4.0), 4, 6};
}

std::complex<double> F_prime(std::complex<double> z) {
  if (z == 0.0) throw std::domain_error("F' has a pole at 0");
  double om = ProfileParams::quad().omega;
  return -4 * om * om * om * G(om * z);
}

double rho0(double r, double tol) {
  check_r(r);
  double vmax = std::pow(-std::log(tol * 1e-3), 0.25);
  // mu = v^2
  auto f = [&](double v) {
    double mu = v * v;
    return 2 * v * std::exp(-mu * mu) * std::pow(v, 5) * 2 * rotated_real(v * r, 4, 1);
  };
  return 2 * std::sqrt(3 / kPi) * integrate(f, 0, vmax, tol);
}

double rho_block_closed(double r, double tol) {
  check_r(r);
  double D4 = std::pow(ProfileParams::quad().D, 0.25);
  double vmax = std::pow(-std::log(tol * 1e-3), 1.0 / 6);
  auto f = [&](double v) {
    double mu = v * v;
    return 2 * v * std::exp(-mu * mu * mu) * std::pow(v, 7) * D4 * 2 * rotated_real(v * D4 * r, 6, 0);
  };
  return 3 / std::tgamma(4.0 / 3) * integrate(f, 0, vmax, tol);
}

namespace {

constexpr double kGridLo = 1e-3, kGridHi = 20;
constexpr int kGridPoints = 600;

struct Rho0Table {
  std::unique_ptr<boost::math::interpolators::cubic_hermite<std::vector<double>>> spline;
  double lo_coeff = 0;
};

const Rho0Table& rho0_table() {
  static std::once_flag once;
  static Rho0Table t;
  std::call_once(once, [] {
    std::vector<double> xs(kGridPoints), ys(kGridPoints), ds(kGridPoints);
    double step = std::log(kGridHi / kGridLo) / (kGridPoints - 1);
    for (int i = 0; i < kGridPoints; ++i) {
      xs[i] = i + 1 == kGridPoints ? kGridHi : kGridLo * std::exp(i * step);
      ys[i] = std::max(0.0, rho0(xs[i]));
      double h = 1e-4 * xs[i];
      ds[i] = (rho0(xs[i] + h) - rho0(xs[i] - h)) / (2 * h);
    }
    t.lo_coeff = ys[0] / (kGridLo * kGridLo * kGridLo);
    t.spline = std::make_unique<boost::math::interpolators::cubic_hermite<std::vector<double>>>(
        std::move(xs), std::move(ys), std::move(ds));
  });
  return t;
}

}  // namespace

double rho0_cached(double r) {
  if (r <= 0) return 0;
  const Rho0Table& t = rho0_table();
  if (r < kGridLo) return t.lo_coeff * r * r * r;
  if (r >= kGridHi) return 0;
  return (*t.spline)(r);
}

double profile_convolution(const RealFn& sigma, const RealFn& rho, double r, int d, double tol) {
  // x = e^s; rho(r/x^(1/d)) vanishes below x = (r/kGridHi)^d and sigma above x ~ 12
  auto f = [&](double s) {
    double x = std::exp(s);
    double q = std::exp(s / d);
    double v = rho(r / q);
    return v == 0 ? 0 : x * sigma(x) * v / q;
  };
  double lo = d * std::log(r / (1.25 * kGridHi)), hi = std::log(12.0);
  int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / 2)));
  double h = (hi - lo) / pieces, sum = 0;
  for (int i = 0; i < pieces; ++i) sum += integrate(f, lo + i * h, lo + (i + 1) * h, tol);
  return sum;
}

double rho_block_conv(double r, double tol) {
  ScalingParams sp(1.5, ProfileParams::quad().D);
  return profile_convolution([&](double x) { return density_sigma(sp, x); }, rho0_cached, r, 4, tol);
}

double rho_block_stuffed(double r, double tol) {
  ScalingParams sp(1.5, ProfileParams::quad().D);
  double c = std::pow(3.0, 0.25);
  return profile_convolution([&](double x) { return density_sigma(sp, x / 3) / 3; },
                             [&](double y) { return c * rho0_cached(c * y); }, r, 4, tol);
}

double profile_moment(const RealFn& rho, double s, double tol) {
  auto f = [&](double r) { return std::pow(r, s) * rho(r); };
  return integrate(f, 1e-4, 1, tol) + integrate(f, 1, 4, tol) + integrate(f, 4, 16, tol);
}

double block_moment_ratio(double s) {
  const ProfileParams p = ProfileParams::quad();
  double d = p.d, dt = p.d_tilde;
  if (!(s > dt - 2 * d)) throw std::domain_error("moment does not exist");
  double x = s + d - dt;
  return d / dt * std::tgamma(1 + x / d) / std::tgamma(1 + x / dt) * std::tgamma((d - dt) / dt) /
         std::tgamma((d - dt) / d) / std::pow(p.D, s / d);
}

double rho_block_small_r_constant() {
  const ProfileParams p = ProfileParams::quad();
  double a = 1.5, d = p.d;
  double k = a * std::tgamma(1 + 1 / a) / (std::tgamma(2 - a) * std::tgamma(1 - 1 / a)) * std::pow(p.D, 2 - a) * d;
  return k * profile_moment([](double y) { return rho0(std::max(y, 1e-4)); }, -d * (2 - a), 1e-12);
}

}  // namespace mapscale
