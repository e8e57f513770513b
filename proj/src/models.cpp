#include "mapscale/models.hpp"

#include "mapscale/map_table.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mapscale {

namespace {

Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

std::vector<ModelDescriptor> make_models() {
  return {
      {ModelId::QuadSimpleBlocks, "quad", Rational(3, 2), CoeffField::rational(), SubstitutionKind::PowerTwo},
      {ModelId::DdswQuartic, "ddsw", Rational(3, 2), CoeffField::quadratic(7), SubstitutionKind::Ddsw},
      {ModelId::BicubicThreeConnected, "bicubic", Rational(3, 2), CoeffField::rational(), SubstitutionKind::PowerThree},
  };
}

const std::vector<ModelDescriptor>& registry() {
  static const std::vector<ModelDescriptor> r = make_models();
  return r;
}

CriticalConstants make_constants(const ModelDescriptor& m) {
  CriticalConstants c;
  c.alpha = m.alpha;
  switch (m.id) {
    case ModelId::QuadSimpleBlocks:
      c.t_cr = Rational(4, 27);
      c.B_tcr = Rational(4, 3);
      c.Bp_tcr = 3;
      c.K_B = Radical(3);
      break;
    case ModelId::DdswQuartic:
      c.t_cr = Rational(1, 12);
      c.B_tcr = Rational(4, 3);
      c.Bp_tcr = 16;
      c.K_B = Radical(64) * Radical::power(3, Rational(1, 2));
      break;
    case ModelId::BicubicThreeConnected:
      c.t_cr = Rational(125, 512);
      c.B_tcr = Rational(5, 4);
      c.Bp_tcr = Rational(512, 425);
      c.K_B = Radical::power(2, Rational(29, 2)) / (Radical(25) * Radical::power(17, Rational(5, 2)));
      break;
  }
  const Rational &t = c.t_cr, &B = c.B_tcr, &Bp = c.Bp_tcr;
  switch (m.kind) {
    case SubstitutionKind::PowerTwo: {
      c.u_cr = 1 / (1 - B + 2 * t * Bp);
      Rational Mc = 1 + c.u_cr * (B - 1);
      c.g_cr = t / (Mc * Mc);
      break;
    }
    case SubstitutionKind::PowerThree: {
      c.u_cr = 1 / (1 - B + 3 * t * Bp);
      Rational Mc = 1 + c.u_cr * (B - 1);
      c.g_cr = t / (Mc * Mc * Mc);
      break;
    }
    case SubstitutionKind::Ddsw: {
      Rational s = B + t * Bp;
      c.u_cr = (B + 2 * t * Bp) / (4 * s * s);
      QuadExt root = QuadExt::sqrt_of(1 - 4 * c.u_cr * B, 0);
      c.g_cr = t / 2 * (1 - 2 * c.u_cr * B + root.a());
      break;
    }
  }
  c.u_cr.canonicalize();
  c.g_cr.canonicalize();
  Rational inv_alpha = 1 / c.alpha;
  c.C = (Radical(t * Bp / c.g_cr) / c.K_B).pow(inv_alpha);
  c.D = c.C * Radical(c.g_cr).pow(inv_alpha) / Radical(t);
  return c;
}

// coefficients of sum_n m_n g^n for general rooted bicubic maps, M_1 of the u = 1 model
long double bicubic_M1(long double g) {
  if (g < 1.0L / 16) {
    long double c = 1, s = 0, gp = 1;  // c_j = binom(3/2, j) (-8)^j
    for (int j = 0; j < 400; ++j) {
      if (j >= 3) {
        long double term = c * gp;
        s += term;
        if (std::fabs(term) < 1e-22L * std::fabs(s) && j > 5) break;
        gp *= g;
      } else if (j == 2) {
        gp = g;
      }
      c *= (1.5L - j) / (j + 1) * -8;
    }
    return 1 + s / 32;
  }
  long double r = 1 - 8 * g;
  return 1 + (-1 + 12 * g - 24 * g * g + r * std::sqrt(std::max(r, 0.0L))) / (32 * g * g);
}

long double series_B(const std::vector<Integer>& b, long double t) {
  long double s = 0, tk = 1;
  for (std::size_t k = 0; k < b.size(); ++k) {
    s += b[k].get_d() * tk;
    tk *= t;
  }
  return s;
}

long double block_B_ld(const ModelDescriptor& m, long double t) {
  const CriticalConstants& c = critical_constants(m);
  long double tc = c.t_cr.get_d();
  if (t < 0 || t > tc * (1 + 1e-15L)) throw std::domain_error("t outside [0, t_cr]");
  t = std::min(t, tc);
  switch (m.id) {
    case ModelId::QuadSimpleBlocks: {
      if (t < tc / 4) return series_B(block_counts(m, 80), t);
      long double r = std::sqrt(3 * t);
      long double a = std::asin(std::min(1.0L, 1.5L * r));
      return 1 + (9 * t - 2 * r * std::sin(a / 3)) / (1 + 2 * std::cos(2 * a / 3));
    }
    case ModelId::DdswQuartic: {
      if (t < tc / 4) return series_B(block_counts(m, 80), t);
      long double r = std::max(0.0L, 1 - 12 * t);
      return (18 * t - 1 + r * std::sqrt(r)) / (54 * t * t);
    }
    case ModelId::BicubicThreeConnected: {
      if (t == tc) return 1.25L;
      long double lo = 0, hi = 0.125L;
      for (int it = 0; it < 200 && hi - lo > 0; ++it) {
        long double mid = (lo + hi) / 2;
        if (mid == lo || mid == hi) break;
        long double M1 = bicubic_M1(mid);
        if (mid * M1 * M1 * M1 < t)
          lo = mid;
        else
          hi = mid;
      }
      return bicubic_M1((lo + hi) / 2);
    }
  }
  return 0;
}

}  // namespace

Integer ModelDescriptor::block_count(int k) const {
  if (k < 0) throw std::out_of_range("negative block size");
  switch (id) {
    case ModelId::QuadSimpleBlocks:
      if (k == 0) return 1;
      return 2 * factorial(3 * k - 3) / (factorial(2 * k - 1) * factorial(k));
    case ModelId::DdswQuartic: {
      Integer three;
      mpz_ui_pow_ui(three.get_mpz_t(), 3, k);
      return 2 * three * binomial(2 * k, k) / ((k + 1) * (k + 2));
    }
    case ModelId::BicubicThreeConnected:
      return block_counts(*this, k)[k];
  }
  return 0;
}

const ModelDescriptor& model(ModelId id) {
  for (auto& m : registry())
    if (m.id == id) return m;
  throw std::invalid_argument("unknown model");
}

const ModelDescriptor& model(const std::string& name) {
  for (auto& m : registry())
    if (m.name == name) return m;
  throw std::invalid_argument("unknown model '" + name + "' (expected quad, ddsw or bicubic)");
}

const std::vector<ModelId>& all_models() {
  static const std::vector<ModelId> ids{ModelId::QuadSimpleBlocks, ModelId::DdswQuartic,
                                        ModelId::BicubicThreeConnected};
  return ids;
}

const CriticalConstants& critical_constants(const ModelDescriptor& m) {
  static const std::map<ModelId, CriticalConstants> table = [] {
    std::map<ModelId, CriticalConstants> r;
    for (auto& d : registry()) r.emplace(d.id, make_constants(d));
    return r;
  }();
  return table.at(m.id);
}

Rational alternative_u_cr(const ModelDescriptor& m) {
  const CriticalConstants& c = critical_constants(m);
  switch (m.kind) {
    case SubstitutionKind::PowerTwo:
      return (Radical(1) / (Radical(2 * c.Bp_tcr) * Radical(c.t_cr * c.g_cr).pow(Rational(1, 2)))).to_rational();
    case SubstitutionKind::PowerThree:
      return (Radical(1) / (Radical(3 * c.Bp_tcr) * Radical(c.t_cr * c.t_cr * c.g_cr).pow(Rational(1, 3))))
          .to_rational();
    case SubstitutionKind::Ddsw: {
      Rational root = Radical(c.g_cr * c.t_cr).pow(Rational(1, 2)).to_rational();
      Rational r = (2 * c.g_cr - root) / (2 * c.t_cr * c.t_cr * c.Bp_tcr);
      r.canonicalize();
      return r;
    }
  }
  return 0;
}

const BivariatePoly& bicubic_polynomial() {
  static const BivariatePoly P = [] {
    BivariatePoly p;
    p.add(0, 7, 1).add(0, 6, -1).add(1, 4, -12).add(1, 3, 11).add(2, 2, 16).add(2, 1, -8).add(2, 0, 1);
    return p;
  }();
  return P;
}

const BivariatePoly& block_polynomial(const ModelDescriptor& m) {
  static const BivariatePoly quad = [] {
    BivariatePoly p;
    p.add(0, 3, 1).add(0, 2, -1).add(1, 1, -18).add(2, 0, 27).add(1, 0, 16);
    return p;
  }();
  static const BivariatePoly ddsw = [] {
    BivariatePoly p;
    p.add(2, 2, 27).add(1, 1, -18).add(0, 1, 1).add(1, 0, 16).add(0, 0, -1);
    return p;
  }();
  switch (m.id) {
    case ModelId::QuadSimpleBlocks:
      return quad;
    case ModelId::DdswQuartic:
      return ddsw;
    case ModelId::BicubicThreeConnected:
      return bicubic_polynomial();
  }
  throw std::invalid_argument("unknown model");
}

std::vector<Integer> block_counts(const ModelDescriptor& m, int N) {
  if (N < 0) throw std::invalid_argument("negative order");
  if (m.id != ModelId::BicubicThreeConnected) {
    std::vector<Integer> b(N + 1);
    for (int k = 0; k <= N; ++k) b[k] = m.block_count(k);
    return b;
  }
  static std::mutex mu;
  static std::vector<Integer> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (static_cast<int>(cache.size()) <= N) {
    int order = std::max(N, 2 * static_cast<int>(cache.size()));
    Series B = newton_algebraic(bicubic_polynomial(), order, 1);
    std::vector<Integer> b(order + 1);
    for (int k = 0; k <= order; ++k) {
      const Rational& q = B[k].a();
      if (q.get_den() != 1) throw std::logic_error("non-integral bicubic block count");
      b[k] = q.get_num();
    }
    cache = std::move(b);
  }
  return std::vector<Integer>(cache.begin(), cache.begin() + N + 1);
}

Series block_series_B(const ModelDescriptor& m, int N) {
  std::vector<Integer> b = block_counts(m, N);
  std::vector<QuadExt> c(b.begin(), b.end());
  return Series(m.field, std::move(c));
}

Series map_series_M(const ModelDescriptor& m, const QuadExt& u, int N) {
  if (!u.is_rational() && (m.field.kind != CoeffField::Kind::QuadraticExt || u.d() != m.field.d))
    throw std::invalid_argument("weight outside the model field");
  if (MapTable::has_integral_grading(m, u)) {
    MapTable tab(m, u, N);
    std::vector<QuadExt> c(N + 1);
    for (int n = 0; n <= N; ++n) c[n] = tab.M(n);
    return Series(m.field, std::move(c));
  }
  std::vector<QuadExt> bq;
  for (auto& x : block_counts(m, N)) bq.emplace_back(x);
  Series g = Series::variable(m.field, N);
  Series one = Series::constant(m.field, 1, N);
  switch (m.kind) {
    case SubstitutionKind::PowerTwo:
    case SubstitutionKind::PowerThree: {
      auto update = [&](const Series& M) {
        Series t = m.kind == SubstitutionKind::PowerTwo ? g * M * M : g * M * M * M;
        return one + ps_scale(ps_compose_poly(bq, t) - one, u);
      };
      return solve_fixed_point(update, N, one);
    }
    case SubstitutionKind::Ddsw: {
      if (u.is_zero()) return one;
      QuadExt W0 = (1 - QuadExt::sqrt_of(1 - 4 * u.a(), m.field.d)) / (2 * u);
      QuadExt gain = (1 - 2 * u * W0).inverse();
      // W = 1 + u W^2 B(g W^2), damped by its linear part so every pass fixes one more coefficient
      auto update = [&](const Series& W) {
        Series W2 = W * W;
        Series r = one + ps_scale(W2 * ps_compose_poly(bq, g * W2), u) - W;
        return W + ps_scale(r, gain);
      };
      Series W = solve_fixed_point(update, N, Series::constant(m.field, W0, N));
      return W * ps_compose_poly(bq, g * W * W);
    }
  }
  return one;
}

Series root_block_term(const ModelDescriptor& m, const QuadExt& u, int k, int N) {
  if (k < m.min_block() || k > N) throw std::out_of_range("block size out of range");
  Series M = map_series_M(m, u, N);
  Series g = Series::variable(m.field, N);
  QuadExt bk(m.block_count(k));
  switch (m.kind) {
    case SubstitutionKind::PowerTwo:
      return ps_scale(ps_pow(g * M * M, k), u * bk);
    case SubstitutionKind::PowerThree:
      return ps_scale(ps_pow(g * M * M * M, k), u * bk);
    case SubstitutionKind::Ddsw: {
      Series W = ps_inverse(Series::constant(m.field, 1, N) - ps_scale(M, u));
      return ps_scale(ps_pow(g, k) * ps_pow(W, 2 * k + 1), bk);
    }
  }
  return {};
}

double block_B_numeric(const ModelDescriptor& m, double t) { return static_cast<double>(block_B_ld(m, t)); }

namespace {

// (t, B(t)) along a rational parametrization, p in [0, 1] with p = 1 at t_cr
std::pair<long double, long double> param_point(const ModelDescriptor& m, long double p) {
  switch (m.id) {
    case ModelId::QuadSimpleBlocks: {
      long double R = 1 + p;
      return {(R - 1) * (4 - R) * (4 - R) / 27, R * (4 - R) / 3};
    }
    case ModelId::DdswQuartic: {
      long double R = 1 + p;
      return {(R - 1) / (3 * R * R), R * (4 - R) / 3};
    }
    case ModelId::BicubicThreeConnected: {
      long double s = 1 - p;
      long double g1 = (1 - s) * (1 + s) / 8;
      long double B;
      if (g1 < 1.0L / 16)
        B = bicubic_M1(g1);
      else
        B = 1 + (-1 + 12 * g1 - 24 * g1 * g1 + s * s * s) / (32 * g1 * g1);
      return {g1 * B * B * B, B};
    }
  }
  return {0, 1};
}

}  // namespace

CriticalPoint solve_critical_point(const ModelDescriptor& m, long double g) {
  const CriticalConstants& c = critical_constants(m);
  const long double gc = c.g_cr.get_d(), u = c.u_cr.get_d();
  if (g < 0) throw std::domain_error("negative g");
  if (g > gc * (1 + 1e-15L)) throw std::domain_error("g beyond g_cr: past the singularity");
  auto state = [&](long double p) {
    auto [t, B] = param_point(m, p);
    CriticalPoint cp;
    cp.t = t;
    cp.prefactor = 1;
    long double gg = 0;
    switch (m.kind) {
      case SubstitutionKind::PowerTwo:
        cp.M = 1 + u * (B - 1);
        gg = t / (cp.M * cp.M);
        break;
      case SubstitutionKind::PowerThree:
        cp.M = 1 + u * (B - 1);
        gg = t / (cp.M * cp.M * cp.M);
        break;
      case SubstitutionKind::Ddsw: {
        long double W = (1 - std::sqrt(std::max(0.0L, 1 - 4 * u * B))) / (2 * u * B);
        cp.M = B * W;
        cp.prefactor = W;
        gg = t / (W * W);
        break;
      }
    }
    return std::pair{cp, gg};
  };
  if (g == 0) return state(0).first;
  if (g >= gc) return state(1).first;
  long double lo = 0, hi = 1;
  for (int it = 0; it < 200; ++it) {
    long double mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;
    if (state(mid).second < g)
      lo = mid;
    else
      hi = mid;
  }
  return state((lo + hi) / 2).first;
}

double eval_M_numeric(const ModelDescriptor& m, double g) {
  return static_cast<double>(solve_critical_point(m, g).M);
}

}  // namespace mapscale
