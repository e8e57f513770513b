#include "mapscale/laws.hpp"

#include "mapscale/map_table.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mapscale {

namespace {

Rational rpow(const Rational& q, unsigned long e) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), e);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Integer falling(long top, int len) {
  Integer r = 1;
  for (int i = 0; i < len; ++i) r *= top - i;
  return r;
}

// prefactor W at t_cr and dW/dt there; W = 1 for the power substitutions
std::pair<Rational, Rational> prefactor_at_tcr(const ModelDescriptor& m) {
  if (m.kind != SubstitutionKind::Ddsw) return {Rational(1), Rational(0)};
  const CriticalConstants& c = critical_constants(m);
  const Rational &u = c.u_cr, &B = c.B_tcr, &Bp = c.Bp_tcr;
  Rational root = QuadExt::sqrt_of(1 - 4 * u * B, 0).a();
  Rational w = (1 - root) / (2 * u * B);
  Rational wp = -u * Bp * w * w / (2 * u * B * w - 1);
  w.canonicalize();
  wp.canonicalize();
  return {w, wp};
}

QuadExt prefactor_cr(const ModelDescriptor& m) { return QuadExt(prefactor_at_tcr(m).first); }

std::shared_ptr<const MapTable> table(const ModelDescriptor& m, int n) { return critical_table(m.id, n); }

void check_n(int n) {
  if (n < 1) throw std::out_of_range("size n must be >= 1");
}

QuadExt Z2_tilde(const MapTable& T, const ModelDescriptor& m, int n) {
  return T.root_sum(n, [&](int k) { return k >= 1 ? Integer(2 * k - 1) * m.block_count(k) : Integer(0); });
}

double alpha_of(const ModelDescriptor& m) { return to_double(m.alpha); }

DistributionTable empty_table(const ModelDescriptor& m, Conditioning c, int index, int marks) {
  DistributionTable t;
  t.model = m.name;
  t.conditioning = c;
  t.index = index;
  t.marks = marks;
  ScalingParams p = ScalingParams::of(m);
  t.alpha = p.alpha;
  t.D = p.D;
  return t;
}

}  // namespace

QuadExt prob_X(const ModelDescriptor& m, int n, int k) {
  check_n(n);
  if (k < m.min_block()) throw std::out_of_range("block size below the model minimum");
  if (k > n) return QuadExt();
  auto T = table(m, n);
  return T->block_weight(k) * T->root(k, n) / T->M(n);
}

QuadExt prob_X2(const ModelDescriptor& m, int n, int k) {
  check_n(n);
  if (k < 1) throw std::out_of_range("block size must be >= 1");
  if (k > n) return QuadExt();
  auto T = table(m, n);
  return QuadExt(Integer(Integer(2 * k - 1) * m.block_count(k))) * T->root(k, n) / Z2_tilde(*T, m, n);
}

QuadExt prob_Y(const ModelDescriptor& m, int k, int n) {
  if (k < m.min_block()) throw std::out_of_range("block size below the model minimum");
  if (n < k) return QuadExt();
  const CriticalConstants& c = critical_constants(m);
  auto T = table(m, n);
  return T->root(k, n) * QuadExt(rpow(c.g_cr, n) / rpow(c.t_cr, k)) / prefactor_cr(m);
}

DistributionTable law_X(const ModelDescriptor& m, int n) {
  check_n(n);
  auto T = table(m, n);
  DistributionTable d = empty_table(m, Conditioning::FixedN, n, 1);
  QuadExt Mn = T->M(n);
  for (int k = m.min_block(); k <= n; ++k) {
    QuadExt p = T->block_weight(k) * T->root(k, n) / Mn;
    d.support.push_back(k);
    d.prob.push_back(p.to_double());
    d.exact.push_back(std::move(p));
  }
  return d;
}

DistributionTable law_X2(const ModelDescriptor& m, int n) {
  check_n(n);
  auto T = table(m, n);
  DistributionTable d = empty_table(m, Conditioning::FixedN, n, 2);
  QuadExt Z = Z2_tilde(*T, m, n);
  for (int k = 1; k <= n; ++k) {
    QuadExt p = QuadExt(Integer(Integer(2 * k - 1) * m.block_count(k))) * T->root(k, n) / Z;
    d.support.push_back(k);
    d.prob.push_back(p.to_double());
    d.exact.push_back(std::move(p));
  }
  return d;
}

double tail_Y(const ModelDescriptor& m, int k, int n_max) {
  ScalingParams p = ScalingParams::of(m);
  auto [w, wp] = prefactor_at_tcr(m);
  double shift = to_double(critical_constants(m).t_cr * wp / w);
  return (k + shift) * p.D / (std::tgamma(1 - 1 / p.alpha) * std::pow(n_max, 1 / p.alpha));
}

DistributionTable law_Y(const ModelDescriptor& m, int k, int n_max, int exact_order) {
  if (k < std::max(1, m.min_block())) throw std::out_of_range("block size must be >= 1");
  double a = alpha_of(m);
  if (n_max <= 0) n_max = std::max(static_cast<int>(std::ceil(10 * std::pow(k, a))), 400);
  if (n_max < k) throw std::out_of_range("n_max below k");
  DistributionTable d = empty_table(m, Conditioning::FixedK, k, 1);
  std::vector<double> row = critical_float_table(m.id, n_max)->law_Y(k);
  int ex = std::min(exact_order, n_max);
  std::shared_ptr<const MapTable> T = ex >= k ? table(m, ex) : nullptr;
  const CriticalConstants& c = critical_constants(m);
  QuadExt scale = T ? QuadExt(rpow(c.g_cr, k) / rpow(c.t_cr, k)) / prefactor_cr(m) : QuadExt();
  QuadExt gq(c.g_cr);
  for (int n = k; n <= n_max; ++n) {
    d.support.push_back(n);
    if (n <= ex) {
      QuadExt p = T->root(k, n) * scale;
      d.prob.push_back(p.to_double());
      d.exact.push_back(std::move(p));
      scale *= gq;
    } else {
      d.prob.push_back(row[n]);
    }
  }
  d.tail_bound = 2 * tail_Y(m, k, n_max);
  return d;
}

Rational limit_pk_exact(const ModelDescriptor& m, int k) {
  if (k < m.min_block()) throw std::out_of_range("block size below the model minimum");
  const CriticalConstants& c = critical_constants(m);
  Rational bk(m.block_count(k));
  if (m.kind != SubstitutionKind::Ddsw) {
    Rational r = bk * k * rpow(c.t_cr, k - 1) / c.Bp_tcr;
    r.canonicalize();
    return r;
  }
  auto [w, wp] = prefactor_at_tcr(m);
  Rational Fp = c.Bp_tcr * w + c.B_tcr * wp;
  Rational tk = k >= 1 ? rpow(c.t_cr, k - 1) * (k * w + c.t_cr * wp) : wp;
  Rational r = bk * tk / Fp;
  r.canonicalize();
  return r;
}

double limit_pk(const ModelDescriptor& m, int k) { return to_double(limit_pk_exact(m, k)); }

double laplace_Y(const ModelDescriptor& m, int k, double lambda, bool scaled) {
  if (!(lambda >= 0)) throw std::domain_error("lambda must be >= 0");
  if (k < std::max(1, m.min_block())) throw std::out_of_range("block size must be >= 1");
  const CriticalConstants& c = critical_constants(m);
  long double l = scaled ? lambda / std::pow(static_cast<long double>(k), to_double(c.alpha)) : lambda;
  long double gc = c.g_cr.get_d();
  CriticalPoint cp = solve_critical_point(m, gc * std::exp(-l));
  long double tc = c.t_cr.get_d();
  long double pc = prefactor_at_tcr(m).first.get_d();
  return static_cast<double>(std::exp(k * std::log(cp.t / tc)) * cp.prefactor / pc);
}

Integer partition_Zp(const ModelDescriptor& m, int p, int k) {
  if (p < 2) throw std::out_of_range("p must be >= 2");
  if (k <= (p - 1) / 2) throw std::out_of_range("block too small for p marks");
  return falling(2L * k - 1, p - 1) * m.block_count(k);
}

QuadExt partition_Ztilde(const ModelDescriptor& m, int p, int n) {
  if (p < 2) throw std::out_of_range("p must be >= 2");
  check_n(n);
  auto T = table(m, n);
  return T->root_sum(n, [&](int k) { return k >= 1 ? falling(2L * k - 1, p - 1) * m.block_count(k) : Integer(0); });
}

double ratio_formula(double alpha, double D, int p, double n, double k) {
  double e = p - 1 - alpha;
  if (e <= 0 && e == std::floor(e)) throw std::domain_error("Gamma pole in the ratio formula");
  return k / n * std::pow(std::pow(n, 1 / alpha) / (D * k), e) * std::tgamma(e) / std::tgamma(e / alpha);
}

double lqg_partition_ratio(double gamma, const std::vector<double>& insertions, double D, double A, double A_dual) {
  if (!(gamma > 0 && gamma < 2)) throw std::domain_error("gamma must lie in (0, 2)");
  double alpha = 4 / (gamma * gamma);
  double Q = 2 / gamma + gamma / 2;
  double sum = 0;
  for (double a : insertions) sum += a;
  double e = (sum - 2 * Q) / gamma;
  return std::tgamma(e) / std::tgamma(e / alpha) * (A / A_dual) * std::pow(std::pow(A_dual, 1 / alpha) / (D * A), e);
}

double ratio_Rp(const ModelDescriptor& m, int p, int n, int k, RatioMode mode) {
  if (mode == RatioMode::Formula) {
    ScalingParams sp = ScalingParams::of(m);
    return ratio_formula(sp.alpha, sp.D, p, n, k);
  }
  const CriticalConstants& c = critical_constants(m);
  QuadExt num = partition_Ztilde(m, p, n) * QuadExt(rpow(c.g_cr, n));
  QuadExt den = QuadExt(Rational(partition_Zp(m, p, k)) * rpow(c.t_cr, k)) * prefactor_cr(m);
  return (num / den).to_double();
}

double collapse_X(const ModelDescriptor& m, int n, Window w) {
  ScalingParams sp = ScalingParams::of(m);
  DistributionTable d = law_X(m, n);
  double scale = std::pow(n, 1 / sp.alpha), dev = 0;
  for (std::size_t i = 0; i < d.support.size(); ++i) {
    double x = d.support[i] / scale;
    if (x < w.lo || x > w.hi) continue;
    dev = std::max(dev, std::fabs(n * d.prob[i] - density_tau(sp, x)));
  }
  return dev;
}

double collapse_X2(const ModelDescriptor& m, int n, Window w) {
  ScalingParams sp = ScalingParams::of(m);
  DistributionTable d = law_X2(m, n);
  double scale = std::pow(n, 1 / sp.alpha), dev = 0;
  for (std::size_t i = 0; i < d.support.size(); ++i) {
    double x = d.support[i] / scale;
    if (x < w.lo || x > w.hi) continue;
    dev = std::max(dev, std::fabs(scale * d.prob[i] - density_sigma(sp, x)));
  }
  return dev;
}

double collapse_Y(const ModelDescriptor& m, int k, int n_max, Window w) {
  ScalingParams sp = ScalingParams::of(m);
  DistributionTable d = law_Y(m, k, n_max, n_max);
  double scale = std::pow(k, sp.alpha), dev = 0;
  for (std::size_t i = 0; i < d.support.size(); ++i) {
    double y = d.support[i] / scale;
    if (y < w.lo || y > w.hi) continue;
    dev = std::max(dev, std::fabs(scale * d.prob[i] - density_wp(sp, y)));
  }
  return dev;
}

}  // namespace mapscale
