#include "doctest.h"

#include "mapscale/quadrature.hpp"
#include "mapscale/scaling.hpp"

#include <cmath>

using namespace mapscale;

namespace {
const ScalingParams kQuad(1.5, 3 / std::cbrt(4.0));

double log_slope(const RealFn& f, double x0, double x1) { return std::log(f(x1) / f(x0)) / std::log(x1 / x0); }
}  // namespace

TEST_CASE("Wright function vanishes at the origin") {
  for (double a : {1.1, 1.5, 1.9}) {
    CHECK(wright_S_series(a, 0).value == 0);
    CHECK(wright_S_integral(a, 0) == 0);
  }
  CHECK(wright_S_airy(0) == 0);
}

TEST_CASE("series and integral agree") {
  for (double a : {1.1, 1.5, 1.9})
    for (double x : {0.1, 0.5, 1.0, 2.0}) {
      CAPTURE(a);
      CAPTURE(x);
      SeriesValue s = wright_S_series(a, x);
      CHECK(s.converged);
      CHECK(std::fabs(s.value - wright_S_integral(a, x)) <= 1e-10);
    }
}

TEST_CASE("Airy closed form at alpha = 3/2") {
  CHECK(std::fabs(wright_S_airy(1) - wright_S_series(1.5, 1).value) <= 1e-12);
  CHECK(std::fabs(wright_S_airy(2) - wright_S_series(1.5, 2).value) <= 1e-12);
  for (double x = 0.25; x <= 8; x += 0.25) {
    CHECK(std::fabs(wright_S_airy(x) - wright_S_integral(1.5, x)) <= 1e-10);
    CHECK(std::fabs(wright_S_airy(x) - wright_S_series(1.5, x).value) <= 1e-10);
  }
}

TEST_CASE("small-x slope is the first series term") {
  for (double a : {1.2, 1.5, 1.8}) {
    double want = std::tgamma(1 + 1 / a) * std::sin(M_PI / a) / M_PI;
    CHECK(wright_S(a, 1e-7) / 1e-7 == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("large-x asymptotics") {
  double r = wright_S(1.5, 10) / wright_S_asymptotic(1.5, 10);
  CHECK(std::fabs(r - 1) < 0.02);
  CHECK(std::fabs(wright_S(1.5, 14) / wright_S_asymptotic(1.5, 14) - 1) < std::fabs(r - 1));
}

TEST_CASE("method switch is seamless") {
  for (double a : {1.1, 1.5, 1.9})
    for (double x = 0.5; x <= 12; x += 0.5) {
      double b = wright_S(a, x), i = wright_S_integral(a, x);
      CHECK(std::fabs(b - i) <= 1e-10 + 1e-9 * std::fabs(i));
    }
}

TEST_CASE("moment identity") {
  for (double s : {-1.5, -1.0, 0.0, 0.5, 1.0}) {
    CAPTURE(s);
    double q = integrate_de([&](double x) { return std::pow(x, s) * wright_S(1.5, x); }, 0, kInf, 1e-12);
    CHECK(std::fabs(q - moment_S(1.5, s)) <= 1e-8);
  }
  CHECK(moment_S(1.5, 0) == doctest::Approx(1 / std::tgamma(2.0 / 3)).epsilon(1e-14));
  CHECK(moment_S(1.5, -1.5) == doctest::Approx(std::tgamma(0.5) / (1.5 * std::tgamma(2.0 / 3))).epsilon(1e-14));
  CHECK(moment_S(1.7, 0.7) == doctest::Approx(std::tgamma(1.7)).epsilon(1e-14));
  CHECK(moment_S(1.5, -1) == doctest::Approx(1 / 1.5).epsilon(1e-14));
  CHECK_THROWS(moment_S(1.5, -2));
}

TEST_CASE("sigma and wp are probability densities") {
  for (double a : {1.2, 1.5, 1.8}) {
    ScalingParams sp(a, a == 1.5 ? kQuad.D : 1.3);
    CAPTURE(a);
    double s = integrate_de([&](double x) { return density_sigma(sp, x); }, 0, kInf, 1e-12);
    double w = integrate_de([&](double y) { return density_wp(sp, y); }, 0, kInf, 1e-12);
    CHECK(std::fabs(s - 1) <= 1e-8);
    CHECK(std::fabs(w - 1) <= 1e-8);
    for (double x = 0.05; x < 10; x *= 1.3) {
      CHECK(density_sigma(sp, x) >= 0);
      CHECK(density_wp(sp, x) >= 0);
      CHECK(density_tau(sp, x) >= 0);
    }
  }
}

TEST_CASE("Laplace transform of wp") {
  for (double l : {0.5, 1.0, 2.0}) {
    double q = integrate_de([&](double y) { return density_wp(kQuad, y) * std::exp(-l * y); }, 0, kInf, 1e-12);
    CHECK(std::fabs(q - std::exp(-kQuad.D * std::pow(l, 2.0 / 3))) <= 1e-7);
  }
}

TEST_CASE("density asymptotics") {
  auto tau = [](double x) { return density_tau(kQuad, x); };
  auto sigma = [](double x) { return density_sigma(kQuad, x); };
  auto wp = [](double y) { return density_wp(kQuad, y); };
  CHECK(std::fabs(log_slope(tau, 1e-4, 1e-3) + 1.5) < 0.01);
  CHECK(std::fabs(log_slope(sigma, 1e-4, 1e-3) + 0.5) < 0.01);
  CHECK(std::fabs(log_slope(wp, 1e4, 1e5) + 5.0 / 3) < 0.02);
  // log sigma ~ -x^(alpha/(alpha-1)); sigma underflows a double beyond x = 10
  double stretch = std::log(std::log(sigma(9)) / std::log(sigma(5))) / std::log(9.0 / 5);
  CHECK(std::fabs(stretch - 3) < 0.05);
}

TEST_CASE("tau is not normalizable at the origin") {
  auto tail = [](double eps) { return integrate([](double x) { return density_tau(kQuad, x); }, eps, kInf, 1e-10); };
  double e = std::log(tail(1e-6) / tail(1e-5)) / std::log(0.1);
  CHECK(std::fabs(e - (1 - 1.5)) < 0.05);
}

TEST_CASE("pinned density values") {
  CHECK(density_tau(kQuad, 1) == doctest::Approx(0.12709085191231803).epsilon(1e-12));
  CHECK(density_sigma(kQuad, 1) == doctest::Approx(0.30592569245640377).epsilon(1e-12));
  CHECK(density_wp(kQuad, 1) == doctest::Approx(0.36699524118413862).epsilon(1e-12));
}

TEST_CASE("sigma moments") {
  for (double p : {0.25, 0.5, 0.75, 1.0}) {
    double q = integrate_de([&](double x) { return std::pow(x, p) * density_sigma(kQuad, x); }, 0, kInf, 1e-12);
    CHECK(sigma_moment(kQuad, p) == doctest::Approx(q).epsilon(1e-8));
  }
}

TEST_CASE("wp distribution function") {
  std::vector<double> ys{0.05, 0.2, 0.7, 1.5, 4, 20, 300};
  std::vector<double> c = wp_cdf_sorted(kQuad, ys);
  for (size_t i = 0; i < ys.size(); ++i) {
    double direct = integrate_de([](double y) { return density_wp(kQuad, y); }, 0, ys[i], 1e-12);
    CHECK(c[i] == doctest::Approx(direct).epsilon(1e-9));
    CHECK(c[i] == doctest::Approx(wp_cdf(kQuad, ys[i])).epsilon(1e-11));
    if (i) CHECK(c[i] > c[i - 1]);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS(ScalingParams(1.0, 1));
  CHECK_THROWS(ScalingParams(1.5, -1));
  CHECK_THROWS(wright_S(2.5, 1));
}
