#include "mapscale/cli.hpp"
#include "mapscale/distance.hpp"
#include "mapscale/dualmeasure.hpp"
#include "mapscale/laws.hpp"
#include "mapscale/multifractal.hpp"
#include "mapscale/quadrature.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace mapscale;
using json = nlohmann::ordered_json;

namespace {

int failures = 0;

struct Outcome {
  bool ok;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.ok) ++failures;
  std::printf("%s %2d %s | %s | %.1fs\n", o.ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

bool decreasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

std::string list(const std::vector<double>& v, const char* f = "%.4g") {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + fmt(f, x);
  return s;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

json cli_json(std::vector<std::string> args) {
  args.insert(args.begin(), "mapscale");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  if (mapscale::cli::run(static_cast<int>(argv.size()), argv.data(), out, err) != 0) throw std::runtime_error(err.str());
  return json::parse(out.str());
}

QuadExt total(const std::vector<QuadExt>& v) {
  QuadExt s;
  for (const QuadExt& x : v) s += x;
  return s;
}

Outcome c1() {
  struct Want {
    const char* model;
    Rational u, g;
    Radical C, D;
  };
  auto P = [](long b, Rational e) { return Radical::power(Rational(b), e); };
  std::vector<Want> want = {
      {"quad", Rational(9, 5), Rational(25, 432), P(2, 4) * P(5, Rational(-4, 3)), P(3, 1) * P(2, Rational(-2, 3))},
      {"ddsw", Rational(9, 64), Rational(3, 64), P(2, Rational(4, 3)) * P(3, Rational(-5, 3)), P(2, Rational(-2, 3))},
      {"bicubic", Rational(68, 43), Rational(43 * 43 * 43, 32768 * 27),
       P(2, Rational(1, 3)) * Radical(Rational(9 * 25 * 17, 43 * 43)), Radical(Rational(17, 5)) * P(2, Rational(-2, 3))},
  };
  int good = 0;
  for (const Want& w : want) {
    const CriticalConstants& c = critical_constants(model(w.model));
    json j = cli_json({"constants", w.model, "--json"});
    bool ok = c.u_cr == w.u && c.g_cr == w.g && c.C == w.C && c.D == w.D && j["u_cr"] == to_string(w.u) &&
              j["g_cr"] == to_string(w.g) && j["C"] == w.C.str() && j["D"] == w.D.str();
    good += ok;
  }
  return {good == 3, fmt("%d/3 models symbolically equal (library and CLI)", good)};
}

Outcome c2() {
  int good = 0, total_cases = 0;
  for (ModelId id : all_models())
    for (int n : {1, 50, 200}) {
      const auto& m = model(id);
      DistributionTable x = law_X(m, n), x2 = law_X2(m, n);
      total_cases += 2;
      good += x.exact.size() == x.support.size() && total(x.exact) == QuadExt(1);
      good += x2.exact.size() == x2.support.size() && total(x2.exact) == QuadExt(1);
    }
  return {good == total_cases, fmt("%d/%d exact sums equal 1", good, total_cases)};
}

Outcome c3() {
  bool ok = true;
  std::string d;
  for (ModelId id : all_models()) {
    const auto& m = model(id);
    int dec = 0, empty = 0;
    for (int k = 1; k <= 5; ++k) {
      double pk = limit_pk(m, k);
      double e100 = std::fabs(prob_X(m, 100, k).to_double() - pk), e200 = std::fabs(prob_X(m, 200, k).to_double() - pk);
      // no blocks of this size: the law is identically zero
      if (m.block_count(k) == 0 && e100 == 0 && e200 == 0) ++empty;
      else dec += e200 < e100;
    }
    ok = ok && dec + empty == 5;
    d += fmt("%s %d/%d decreasing", m.name.c_str(), dec, 5 - empty);
    d += empty ? fmt(" (%d sizes without blocks); ", empty) : std::string("; ");
  }
  const auto& q = model("quad");
  double rel = std::fabs(prob_X(q, 200, 1).to_double() / limit_pk(q, 1) - 1);
  ok = ok && rel < 0.05;
  d += fmt("quad k=1 rel err at n=200 %.4g", rel);
  return {ok, d};
}

Outcome c4() {
  struct Seq {
    const char* name;
    std::function<double(int)> dev;
    std::vector<int> sizes;
    double pinned;
  };
  const auto& q = model("quad");
  const auto& b = model("bicubic");
  std::vector<Seq> seqs = {
      {"quad X", [&](int n) { return collapse_X(q, n, kWindowX); }, {30, 50, 100, 200}, 0.005196740298},
      {"quad X2", [&](int n) { return collapse_X2(q, n, kWindowX2); }, {30, 50, 100, 200}, 0.04184692643},
      {"quad Y", [&](int k) { return collapse_Y(q, k, 200, kWindowY); }, {5, 10, 25, 40}, 0.02950529932},
      {"bicubic X2", [&](int n) { return collapse_X2(b, n, kWindowX2); }, {100, 200, 300, 400}, 0.02410146327},
      {"bicubic Y", [&](int k) { return collapse_Y(b, k, 400, kWindowY); }, {20, 40, 65, 80}, 0.02869295336},
  };
  bool ok = true;
  std::string d;
  for (const Seq& s : seqs) {
    std::vector<double> v;
    for (int n : s.sizes) v.push_back(s.dev(n));
    bool mono = decreasing(v), pin = std::fabs(v.back() / s.pinned - 1) < 1e-6;
    ok = ok && mono && pin;
    d += fmt("%s [%s]%s%s; ", s.name, list(v).c_str(), mono ? "" : " NOT MONOTONE",
             pin ? "" : fmt(" terminal %.10g != pinned", v.back()).c_str());
  }
  return {ok, d};
}

double laplace_sup(int k) {
  const auto& q = model("quad");
  double D = ScalingParams::of(q).D, sup = 0;
  for (double l : linspace(0, 3, 301))
    sup = std::max(sup, std::fabs(laplace_Y(q, k, l, true) - std::exp(-D * std::pow(l, 2.0 / 3))));
  return sup;
}

Outcome c5() {
  double s25 = laplace_sup(25), s40 = laplace_sup(40);
  const double pinned = 0.00409151;
  bool ok = s40 <= 0.02 && s40 < s25 && std::fabs(s40 - pinned) < 5e-6;
  return {ok, fmt("sup k=25 %.6g, k=40 %.6g (bound 0.02, pinned %.6g)", s25, s40, pinned)};
}

Outcome c6() {
  double worst_si = 0, worst_airy = 0;
  for (double a : {1.1, 1.5, 1.9})
    for (double x : {0.1, 0.5, 1.0, 2.0}) worst_si = std::max(worst_si, std::fabs(wright_S_series(a, x).value - wright_S_integral(a, x)));
  for (double x : {0.1, 0.5, 1.0, 2.0})
    worst_airy = std::max({worst_airy, std::fabs(wright_S_airy(x) - wright_S_series(1.5, x).value),
                           std::fabs(wright_S_airy(x) - wright_S_integral(1.5, x))});
  double worst_mom = 0;
  for (double s : {-1.5, 0.0, 0.5}) {
    double qd = integrate_de([&](double x) { return std::pow(x, s) * wright_S(1.5, x); }, 0, kInf, 1e-12);
    worst_mom = std::max(worst_mom, std::fabs(qd - moment_S(1.5, s)));
  }
  ScalingParams sp = ScalingParams::of(model("quad"));
  double is = integrate_de([&](double x) { return density_sigma(sp, x); }, 0, kInf, 1e-12);
  double iw = integrate_de([&](double y) { return density_wp(sp, y); }, 0, kInf, 1e-12);
  bool ok = worst_si <= 1e-10 && worst_airy <= 1e-10 && worst_mom <= 1e-8 && std::fabs(is - 1) <= 1e-8 &&
            std::fabs(iw - 1) <= 1e-8;
  return {ok, fmt("series-integral %.2e, airy %.2e, moments %.2e, int sigma-1 %.2e, int wp-1 %.2e", worst_si,
                  worst_airy, worst_mom, is - 1, iw - 1)};
}

Outcome c7() {
  double sup = 0;
  for (double r : linspace(0.2, 3, 57)) sup = std::max(sup, std::fabs(rho_block_conv(r) - rho_block_closed(r)));
  RealFn r0 = [](double r) { return rho0(r); }, rb = [](double r) { return rho_block_closed(r); };
  double i0 = integrate(r0, 1e-4, 40, 1e-11), ib = integrate(rb, 1e-4, 40, 1e-11);
  auto slope = [](const RealFn& f) { return std::log(f(0.08) / f(0.02)) / std::log(4.0); };
  double s0 = slope(r0), sb = slope(rb);
  double stuffed = 0;
  for (double r : {0.3, 0.9, 1.7, 2.6}) stuffed = std::max(stuffed, std::fabs(rho_block_stuffed(r) - rho_block_closed(r)));
  bool ok = sup <= 1e-4 && std::fabs(i0 - 1) <= 1e-6 && std::fabs(ib - 1) <= 1e-6 && std::fabs(s0 - 3) < 0.05 &&
            std::fabs(sb - 1) < 0.05 && stuffed <= 1e-4;
  return {ok, fmt("sup|conv-closed| %.2e, int-1 %.1e/%.1e, slopes %.4f/%.4f, stuffed %.2e", sup, i0 - 1, ib - 1, s0, sb,
                  stuffed)};
}

Outcome c8() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dn(10, 5000), dk(1, 500);
  double worst = 0;
  for (ModelId id : all_models()) {
    ScalingParams sp = ScalingParams::of(model(id));
    double gamma = std::sqrt(4 / sp.alpha);
    for (int p = 2; p <= 4; ++p)
      for (int i = 0; i < 20; ++i) {
        int n = dn(rng), k = dk(rng);
        double f = ratio_Rp(model(id), p, n, k, RatioMode::Formula);
        double c = lqg_partition_ratio(gamma, std::vector<double>(p, gamma), sp.D, k, n);
        worst = std::max(worst, std::fabs(f / c - 1));
      }
  }
  bool ok = worst <= 1e-12;
  std::string d = fmt("formula vs continuum %.1e; coefficient error at n=100,200 with k=floor(n^(2/3)):", worst);
  const auto& q = model("quad");
  for (int p = 2; p <= 4; ++p) {
    std::vector<double> e;
    for (int n : {100, 200}) {
      int k = static_cast<int>(std::floor(std::pow(n, 2.0 / 3) + 1e-9));
      e.push_back(std::fabs(ratio_Rp(q, p, n, k, RatioMode::Coefficients) / ratio_Rp(q, p, n, k, RatioMode::Formula) - 1));
    }
    bool mono = e[1] < e[0];
    ok = ok && mono;
    d += fmt(" p=%d [%s]%s", p, list(e).c_str(), mono ? "" : " NOT DECREASING");
  }
  return {ok, d};
}

double legendre_err(const RealFn& f, double lo, double hi, const RealFn& tau, const std::vector<double>& qs,
                    const std::vector<double>& breaks = {}) {
  auto r = legendre_numeric(f, legendre_grid(lo, hi, 2001, breaks), qs);
  double m = r.concave ? 0 : INFINITY;
  for (size_t i = 0; i < qs.size(); ++i) m = std::max(m, std::fabs(r.values[i] - tau(qs[i])));
  return m;
}

Outcome c9() {
  const double g = std::sqrt(8.0 / 3), gp = std::sqrt(6.0);
  double leg = 0;
  // a.s. spectra: inverse transform of f over its support, both sides
  double lo = (2 - g) * (2 - g) / 2, hi = (2 + g) * (2 + g) / 2;
  leg = std::max(leg, legendre_err([&](double b) { return f_as(g, b); }, lo, hi,
                                   [&](double q) { return tau_as(g, q); }, linspace(-4, 4, 161)));
  leg = std::max(leg, legendre_err([&](double b) { return f_as_dual(gp, b); }, 0, (2 + gp) * (2 + gp) / 2,
                                   [&](double q) { return tau_as_dual(gp, q); }, linspace(-3, 3, 121),
                                   {gp * gp / 2 - 2}));
  // forward transform of the parabolic L^q pieces
  for (double x : {g, gp}) {
    double qmax = 4 / (x * x) - 1e-12;
    leg = std::max(leg, legendre_err([&](double q) { return tau_expected(x, q); }, -8, qmax,
                                     [&](double b) { return f_expected(x, b); }, linspace(0, 8, 161)));
  }
  for (double x : {g, gp}) {
    auto [blo, bhi] = qball_beta_range(x);
    auto [qlo, qhi] = qball_q_range(x);
    double w = qhi - qlo;
    leg = std::max(leg, legendre_err([&](double b) { return qball_f(x, b); }, blo, bhi,
                                     [&](double q) { return qball_tau(x, q); }, linspace(qlo - w / 2, qhi + w / 2, 161)));
  }

  std::mt19937_64 rng(99);
  double dual = 0;
  double al = lqg_alpha(gp);
  std::uniform_real_distribution<double> U(-3, 1 / al - 1e-6);
  for (int i = 0; i < 20; ++i) {
    double q = U(rng);
    dual = std::max(dual, std::fabs(xi(gp, q) - xi(g, al * q)));
  }
  Rational a(3, 2);
  bool gs = (1 - string_susceptibility(a)) * (1 - string_susceptibility_dual(a)) == 1;
  auto r = qball_q_range(g), rd = qball_q_range(gp);
  dual = std::max({dual, std::fabs(r.first - rd.first), std::fabs(r.second - rd.second)});
  double kpz = 0;
  for (double x : {g, gp}) {
    double aa = a_gamma(x);
    std::uniform_real_distribution<double> V(-aa * aa / 2 + 1e-3, 5);
    for (int i = 0; i < 20; ++i) {
      double q = V(rng);
      kpz = std::max(kpz, std::fabs(kpz_inverse(x, kpz_delta(x, q)) - q));
    }
  }
  bool ok = leg <= 1e-6 && dual <= 1e-12 && gs && kpz <= 1e-12;
  return {ok, fmt("legendre %.2e, xi/q-pm duality %.1e, gamma_S %s, kpz %.1e", leg, dual, gs ? "exact" : "FAILED", kpz)};
}

Outcome c10() {
  const double alpha = 1.5, D = ScalingParams::of(model("quad")).D;
  auto lap = sample_dual_masses(1, D, alpha, 100000, 777);
  std::vector<double> zl, zm;
  for (double u : {0.5, 1.0, 2.0}) zl.push_back(mc_laplace(lap, u, 1, D, alpha).z);
  auto mom = sample_dual_masses(1, 1, alpha, 1000000, 777);
  for (double q : {-0.5, 0.2, 0.4}) zm.push_back(mc_moment(mom, q, 1, 1, alpha).z);
  auto ks = sample_dual_masses(1, D, alpha, 10000, 778);
  KsResult k = ks_against_wp(ks, D, alpha);
  bool repro = sample_dual_masses(1, D, alpha, 100000, 777) == lap;
  bool ok = repro && k.p_value > 0.01;
  for (double z : zl) ok = ok && std::fabs(z) < 3;
  for (double z : zm) ok = ok && std::fabs(z) < 3;
  return {ok, fmt("laplace z [%s], moment z [%s], ks p %.3f, reproducible %s", list(zl, "%.2f").c_str(),
                  list(zm, "%.2f").c_str(), k.p_value, repro ? "yes" : "no")};
}

}  // namespace

int main() {
  criterion(1, "exact constants", c1);
  criterion(2, "exact normalization", c2);
  criterion(3, "discrete limit law", c3);
  criterion(4, "scaling collapse", c4);
  criterion(5, "laplace limit", c5);
  criterion(6, "wright function cross-validation", c6);
  criterion(7, "distance-profile convolution", c7);
  criterion(8, "ratio duality", c8);
  criterion(9, "multifractal oracles", c9);
  criterion(10, "monte carlo dual measure", c10);
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
