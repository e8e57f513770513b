#include "doctest.h"

#include "mapscale/multifractal.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <random>

using namespace mapscale;

namespace {
const double g0 = std::sqrt(8.0 / 3.0);
const double gp0 = std::sqrt(6.0);

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

double max_abs_diff(const std::vector<double>& xs, const std::vector<double>& got, const RealFn& want) {
  double m = 0;
  for (size_t i = 0; i < xs.size(); ++i) m = std::max(m, std::fabs(got[i] - want(xs[i])));
  return m;
}

double fmax_on(const RealFn& f, double a, double b) {
  auto r = boost::math::tools::brent_find_minima([&](double x) { return -f(x); }, a, b, 60);
  return -r.second;
}

double dnum(const RealFn& f, double x, double h) { return (f(x + h) - f(x - h)) / (2 * h); }
}  // namespace

TEST_CASE("xi: values and domain") {
  CHECK(xi(g0, 0) == 0);
  CHECK(xi(g0, 1) == doctest::Approx(2).epsilon(1e-15));
  CHECK(xi(g0, 0.5) == doctest::Approx(4.0 / 3).epsilon(1e-14));
  CHECK(xi(gp0, 0.5) == doctest::Approx(5 * 0.5 - 3 * 0.25).epsilon(1e-14));
  CHECK_THROWS(xi(g0, 1.5));
  CHECK_THROWS(xi(gp0, 0.7));
  CHECK(dual_gamma(g0) == doctest::Approx(gp0));
  CHECK(Q_gamma(g0) == doctest::Approx(Q_gamma(gp0)).epsilon(1e-15));
  CHECK(a_gamma(gp0) == doctest::Approx(-a_gamma(g0)).epsilon(1e-15));
}

TEST_CASE("duality of xi and tau-bar at random q") {
  std::mt19937_64 rng(7);
  for (double g : {g0, 1.0, 1.7}) {
    double gp = dual_gamma(g), al = lqg_alpha(gp);
    CHECK(al == doctest::Approx(gp * gp / 4));
    std::uniform_real_distribution<double> U(-3, 1 / al - 1e-6);
    for (int i = 0; i < 20; ++i) {
      double q = U(rng);
      CHECK(std::fabs(xi(gp, q) - xi(g, al * q)) < 1e-12);
      CHECK(std::fabs(tau_expected(gp, q) - tau_expected(g, al * q)) < 1e-12);
    }
  }
}

TEST_CASE("dimension duality on the parabolic range") {
  double al = lqg_alpha(gp0);
  for (double b : linspace(6.0 / 2 - 2, 12, 50))
    CHECK(std::fabs(f_expected(gp0, b) - f_expected(g0, b / al)) < 1e-12);
}

TEST_CASE("string susceptibility duality") {
  Rational a(3, 2);
  Rational gs = string_susceptibility(a), gsd = string_susceptibility_dual(a);
  CHECK(gs == Rational(-1, 2));
  CHECK(gsd == Rational(1, 3));
  CHECK((1 - gs) * (1 - gsd) == 1);
  for (Rational al : {Rational(5, 4), Rational(7, 5), Rational(19, 10)})
    CHECK((1 - string_susceptibility(al)) * (1 - string_susceptibility_dual(al)) == 1);
}

TEST_CASE("f_as: vertex, boundaries, truncation") {
  for (double g : {g0, 0.5, 1.9}) {
    double lo = (2 - g) * (2 - g) / 2, hi = (2 + g) * (2 + g) / 2;
    CHECK(std::fabs(f_as(g, lo)) < 1e-12);
    CHECK(std::fabs(f_as(g, hi)) < 1e-12);
    CHECK(f_as(g, 2 + g * g / 2) == doctest::Approx(2).epsilon(1e-15));
    CHECK(fmax_on([&](double b) { return f_as(g, b); }, lo, hi) == doctest::Approx(2).epsilon(1e-12));
    for (double b : linspace(0, 3 * hi, 301)) {
      CHECK(f_as(g, b) == doctest::Approx(std::max(f_expected(g, b), 0.0)).epsilon(1e-14));
      CHECK(f_as(g, b) >= 0);
    }
  }
}

TEST_CASE("f_as_dual: linear piece, derivative continuity, truncation") {
  double j = gp0 * gp0 / 2 - 2, hi = (2 + gp0) * (2 + gp0) / 2;
  RealFn f = [](double b) { return f_as_dual(gp0, b); };
  CHECK(f(0.5) == doctest::Approx(4 * 0.5 / 6));
  double h = 1e-6;
  double left = (f(j) - f(j - h)) / h, right = (f(j + h) - f(j)) / h;
  CHECK(left == doctest::Approx(4 / 6.0).epsilon(1e-5));
  CHECK(right == doctest::Approx(4 / 6.0).epsilon(1e-5));
  CHECK(std::fabs(f(hi)) < 1e-12);
  for (double b : linspace(0, 2 * hi, 301)) {
    CHECK(f(b) == doctest::Approx(std::max(f_expected(gp0, b), 0.0)).epsilon(1e-14));
    CHECK(f(b) >= 0);
  }
}

TEST_CASE("tau_as_dual: flat piece and maximum") {
  double qf = 4 / (gp0 * gp0);
  CHECK(std::fabs(tau_as_dual(gp0, qf)) < 1e-12);
  CHECK(tau_as_dual(gp0, 5) == 0);
  double m = fmax_on([](double q) { return tau_as_dual(gp0, q); }, -2, qf);
  CHECK(std::fabs(m) < 1e-9);
  for (double q : linspace(-2, qf - 1e-3, 50)) CHECK(tau_as_dual(gp0, q) < 0);
}

TEST_CASE("legendre oracle: parabola conjugate and biconjugation") {
  RealFn g = [](double x) { return -0.5 * x * x; };
  auto grid = legendre_grid(-6, 6, 2001);
  auto s = linspace(-3, 3, 121);
  auto r = legendre_numeric(g, grid, s);
  CHECK(r.concave);
  CHECK(max_abs_diff(s, r.values, [](double t) { return -0.5 * t * t; }) < 1e-9);

  // the conjugate is concave again; conjugating back recovers g
  RealFn h = [&](double t) { return legendre_numeric(g, grid, {t}).values[0]; };
  auto xs = linspace(-2, 2, 41);
  auto rr = legendre_numeric(h, legendre_grid(-4, 4, 401), xs);
  CHECK(max_abs_diff(xs, rr.values, g) < 1e-6);

  auto bad = legendre_numeric([](double x) { return x * x; }, grid, {0.0});
  CHECK_FALSE(bad.concave);
}

TEST_CASE("legendre of tau-bar reproduces f-bar") {
  for (double g : {g0, 1.0}) {
    double qmax = 4 / (g * g) - 1e-9;
    auto grid = legendre_grid(-8, qmax, 2001);
    auto betas = linspace(0, 8, 161);
    auto r = legendre_numeric([&](double q) { return tau_expected(g, q); }, grid, betas);
    CHECK(r.concave);
    CHECK(max_abs_diff(betas, r.values, [&](double b) { return f_expected(g, b); }) < 1e-6);
  }
}

TEST_CASE("legendre of dual tau-bar reproduces the linear and parabolic pieces") {
  double qmax = 4 / (gp0 * gp0) - 1e-12;
  auto grid = legendre_grid(-6, qmax, 2001);
  auto betas = linspace(0, 12, 241);
  auto r = legendre_numeric([](double q) { return tau_expected(gp0, q); }, grid, betas);
  CHECK(max_abs_diff(betas, r.values, [](double b) { return f_expected(gp0, b); }) < 1e-6);
}

TEST_CASE("inverse legendre of f_as reproduces tau_as") {
  for (double g : {g0, 1.2}) {
    double lo = (2 - g) * (2 - g) / 2, hi = (2 + g) * (2 + g) / 2;
    auto grid = legendre_grid(lo, hi, 2001);
    auto qs = linspace(-4, 4, 161);
    auto r = legendre_numeric([&](double b) { return f_as(g, b); }, grid, qs);
    CHECK(r.concave);
    CHECK(max_abs_diff(qs, r.values, [&](double q) { return tau_as(g, q); }) < 1e-6);
  }
}

TEST_CASE("inverse legendre of f_as_dual reproduces tau_as_dual") {
  double hi = (2 + gp0) * (2 + gp0) / 2;
  auto grid = legendre_grid(0, hi, 2001, {gp0 * gp0 / 2 - 2});
  auto qs = linspace(-3, 3, 121);
  auto r = legendre_numeric([](double b) { return f_as_dual(gp0, b); }, grid, qs);
  CHECK(r.concave);
  CHECK(max_abs_diff(qs, r.values, [](double q) { return tau_as_dual(gp0, q); }) < 1e-6);
}

TEST_CASE("kpz map") {
  std::mt19937_64 rng(11);
  for (double g : {g0, gp0, 1.0, 3.0}) {
    double a = a_gamma(g);
    std::uniform_real_distribution<double> U(-a * a / 2 + 1e-3, 5);
    for (int i = 0; i < 20; ++i) {
      double q = U(rng);
      CHECK(std::fabs(kpz_inverse(g, kpz_delta(g, q)) - q) < 1e-12);
    }
    CHECK_THROWS(kpz_delta(g, -a * a / 2 - 1e-3));
  }
  CHECK(kpz_delta(g0, 0) == 0);
  CHECK(kpz_delta(gp0, 0) == doctest::Approx(1 - 4 / 6.0).epsilon(1e-14));

  // positive root of (g^2/2) D^2 + (2 - g^2/2) D - 1 = 0
  double A = g0 * g0 / 2, B = 2 - A;
  double d = 0.5;
  for (int i = 0; i < 60; ++i) d -= (A * d * d + B * d - 1) / (2 * A * d + B);
  CHECK(kpz_delta(g0, 1) == doctest::Approx(d).epsilon(1e-14));
  CHECK(kpz_delta(g0, 1) == doctest::Approx((std::sqrt(13.0) - 1) / 4).epsilon(1e-14));
}

TEST_CASE("quantum ball spectra: maxima and transition abscissae") {
  auto [blo, bhi] = qball_beta_range(g0);
  RealFn f = [](double b) { return qball_f(g0, b); };
  CHECK(std::fabs(fmax_on(f, blo, bhi) - 1) < 1e-12);
  CHECK(std::fabs(f(blo)) < 1e-12);
  CHECK(std::fabs(f(bhi)) < 1e-12);

  auto [dlo, dhi] = qball_beta_range(gp0);
  CHECK(dlo == doctest::Approx(2 / ((2 + gp0) * (2 + gp0))));
  CHECK(std::fabs(fmax_on([](double b) { return qball_f(gp0, b); }, dlo, 10) - 4 / 6.0) < 1e-12);

  for (double g : {g0, 1.0, 1.5}) {
    auto r = qball_q_range(g), rd = qball_q_range(dual_gamma(g));
    double Q = Q_gamma(g);
    CHECK(r.first == doctest::Approx(2 * (2 - Q)).epsilon(1e-14));
    CHECK(r.second == doctest::Approx(2 * (2 + Q)).epsilon(1e-14));
    CHECK(rd.first == doctest::Approx(r.first).epsilon(1e-14));
    CHECK(rd.second == doctest::Approx(r.second).epsilon(1e-14));
  }

  // slopes of the linear pieces
  auto [qlo, qhi] = qball_q_range(g0);
  RealFn t = [](double q) { return qball_tau(g0, q); };
  CHECK(dnum(t, qlo - 1, 1e-3) == doctest::Approx(bhi).epsilon(1e-9));
  CHECK(dnum(t, qhi + 1, 1e-3) == doctest::Approx(blo).epsilon(1e-9));
  CHECK(dnum(t, qlo + 1e-7, 1e-8) == doctest::Approx(bhi).epsilon(1e-3));
  CHECK(dnum(t, qhi - 1e-7, 1e-8) == doctest::Approx(blo).epsilon(1e-3));
}

TEST_CASE("quantum ball: inverse legendre of f reproduces tau") {
  for (double g : {g0, gp0}) {
    auto [blo, bhi] = qball_beta_range(g);
    auto [qlo, qhi] = qball_q_range(g);
    auto grid = legendre_grid(blo, bhi, 2001);
    double w = qhi - qlo;
    auto qs = linspace(qlo - w / 2, qhi + w / 2, 161);
    auto r = legendre_numeric([&](double b) { return qball_f(g, b); }, grid, qs);
    CHECK(r.concave);
    CHECK(max_abs_diff(qs, r.values, [&](double q) { return qball_tau(g, q); }) < 1e-6);
  }
}

TEST_CASE("spectrum curves") {
  for (double g : {g0, gp0}) {
    auto c = spectrum(SpectrumKind::DimAlmostSure, g, 0, 20, 400);
    CHECK(c.samples.size() == 401);
    for (auto [b, v] : c.samples) CHECK(v >= 0);
    auto e = spectrum(SpectrumKind::DimExpected, g, 0, 20, 400);
    bool neg = false;
    for (auto [b, v] : e.samples) neg = neg || v < 0;
    CHECK(neg);
    auto l = spectrum(SpectrumKind::LqExpected, g, -2, 5, 100);
    CHECK(l.hi < 4 / (g * g));
  }
  auto c = spectrum(SpectrumKind::LqAlmostSure, g0, -3, 3, 60);
  REQUIRE(c.boundaries.size() == 2);
  CHECK(c.boundaries[0] == doctest::Approx(-2 / g0));
  auto [t, f] = quantum_ball_spectra(gp0, 200);
  CHECK(t.kind == SpectrumKind::QuantumBallLq);
  CHECK(f.samples.size() == 201);
  CHECK_THROWS(spectrum(SpectrumKind::LqExpected, 2.0, 0, 1, 10));
  CHECK_THROWS(f_as(gp0, 1));
  CHECK_THROWS(f_as_dual(g0, 1));
}
