#include "mapscale/map_table.hpp"

#include <map>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace mapscale {

namespace {

struct Zd {
  Integer a, b;
};

// multiplier (p + q sqrt(d)) / l applied with an exact final division
struct Scalar {
  Integer p, q, l;

  static Scalar of(const QuadExt& x) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), x.a().get_den_mpz_t(), x.b().get_den_mpz_t());
    Integer p = x.a().get_num() * (l / x.a().get_den());
    Integer q = x.b().get_num() * (l / x.b().get_den());
    return {p, q, l};
  }
};

void divexact(Integer& x, const Integer& by) {
  if (by == 1) return;
  if (!mpz_divisible_p(x.get_mpz_t(), by.get_mpz_t())) throw std::logic_error("map table grading is not integral");
  mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), by.get_mpz_t());
}

}  // namespace

struct MapTable::Impl {
  const ModelDescriptor* m;
  QuadExt u;
  int N;
  long d = 0;
  Integer kappa, delta;
  std::vector<Integer> den;  // kappa * delta^n
  std::vector<Integer> b;

  std::vector<Zd> M, Ms, t, W, W2, Bt;
  std::vector<std::vector<Zd>> S;

  void addmul(Zd& acc, Integer& bb, const Zd& x, const Zd& y) const {
    mpz_addmul(acc.a.get_mpz_t(), x.a.get_mpz_t(), y.a.get_mpz_t());
    if (d == 0) return;
    mpz_addmul(bb.get_mpz_t(), x.b.get_mpz_t(), y.b.get_mpz_t());
    mpz_addmul(acc.b.get_mpz_t(), x.a.get_mpz_t(), y.b.get_mpz_t());
    mpz_addmul(acc.b.get_mpz_t(), x.b.get_mpz_t(), y.a.get_mpz_t());
  }

  void finish(Zd& acc, Integer& bb) const {
    if (d != 0 && bb != 0) mpz_addmul_ui(acc.a.get_mpz_t(), bb.get_mpz_t(), static_cast<unsigned long>(d));
    divexact(acc.a, kappa);
    divexact(acc.b, kappa);
  }

  // (sum_{j=lo}^{hi} x_j y_{n-j}) / kappa
  Zd conv(const std::vector<Zd>& x, const std::vector<Zd>& y, int n, int lo, int hi) const {
    Zd acc;
    Integer bb;
    for (int j = lo; j <= hi; ++j) addmul(acc, bb, x[j], y[n - j]);
    finish(acc, bb);
    return acc;
  }

  Zd scale(const Zd& x, const Scalar& s) const {
    Zd r;
    r.a = s.p * x.a + s.q * x.b * d;
    r.b = s.p * x.b + s.q * x.a;
    divexact(r.a, s.l);
    divexact(r.b, s.l);
    return r;
  }

  Zd block_sum(int n, const std::function<Integer(int)>& c) const {
    Zd acc;
    for (int k = 1; k <= n; ++k) {
      Integer ck = c(k);
      if (ck == 0) continue;
      mpz_addmul(acc.a.get_mpz_t(), ck.get_mpz_t(), S[k][n].a.get_mpz_t());
      if (d) mpz_addmul(acc.b.get_mpz_t(), ck.get_mpz_t(), S[k][n].b.get_mpz_t());
    }
    return acc;
  }

  QuadExt value(const Zd& x, int n) const {
    return QuadExt(Rational(x.a, den[n]), Rational(x.b, den[n]), x.b == 0 ? 0 : d);
  }

  Zd embed(const QuadExt& x) const {
    Zd r;
    Rational a = x.a() * kappa, bq = x.b() * kappa;
    if (a.get_den() != 1 || bq.get_den() != 1) throw std::logic_error("constant term is not integral under the grading");
    r.a = a.get_num();
    r.b = bq.get_num();
    return r;
  }

  void build();
};

bool MapTable::has_integral_grading(const ModelDescriptor& m, const QuadExt& u) {
  if (!u.is_rational()) return false;
  if (m.kind != SubstitutionKind::Ddsw) return true;
  return u.is_zero() || u == QuadExt(critical_constants(m).u_cr);
}

void MapTable::Impl::build() {
  std::vector<Integer> bk = block_counts(*m, N);
  b = bk;
  bool ddsw = m->kind == SubstitutionKind::Ddsw;
  if (ddsw) {
    d = 7;
    if (u.is_zero()) {
      kappa = 1;
      delta = 1;
    } else {
      kappa = 81;
      delta = 567;
    }
  } else {
    kappa = 1;
    delta = u.a().get_den();
  }
  den.resize(N + 1);
  den[0] = kappa;
  for (int n = 1; n <= N; ++n) den[n] = den[n - 1] * delta;

  S.assign(N + 1, {});
  for (int k = 0; k <= N; ++k) S[k].resize(N + 1);
  S[0][0].a = kappa;
  M.resize(N + 1);
  Ms.resize(N + 1);
  t.resize(N + 1);

  Scalar uu = Scalar::of(u);
  Scalar w_gain{0, 0, 1};
  std::vector<Zd> M2;
  if (ddsw) {
    W.resize(N + 1);
    W2.resize(N + 1);
    Bt.resize(N + 1);
    QuadExt W0 = 1;
    if (!u.is_zero()) W0 = (1 - QuadExt::sqrt_of(1 - 4 * u.a(), 7)) / (2 * u);
    QuadExt eps = 1 - 2 * u * W0;
    w_gain = Scalar::of(u / eps);
    W[0] = embed(W0);
    W2[0] = conv(W, W, 0, 0, 0);
    Bt[0].a = kappa;
    M[0] = W[0];
  } else {
    M[0].a = kappa;
    M2.resize(N + 1);
    M2[0].a = kappa;
    Ms[0].a = kappa;
  }
  int s = m->kind == SubstitutionKind::PowerThree ? 3 : 2;

  for (int n = 1; n <= N; ++n) {
    const Zd& src = ddsw ? W2[n - 1] : Ms[n - 1];
    t[n].a = src.a * delta;
    t[n].b = src.b * delta;
    S[1][n] = t[n];
    for (int k = 2; k <= n; ++k) {
      Zd acc;
      Integer bb;
      for (int i = 1; i <= n - k + 1; ++i) addmul(acc, bb, t[i], S[k - 1][n - i]);
      finish(acc, bb);
      S[k][n] = std::move(acc);
    }
    Zd sum = block_sum(n, [&](int k) { return bk[k]; });
    if (!ddsw) {
      M[n] = scale(sum, uu);
      M2[n] = conv(M, M, n, 0, n);
      Ms[n] = s == 2 ? M2[n] : conv(M2, M, n, 0, n);
    } else {
      Bt[n] = sum;
      Zd q;
      Integer bb;
      for (int j = 1; j <= n - 1; ++j) addmul(q, bb, W[j], W[n - j]);
      Zd cross = q;
      Integer cross_bb = bb;
      for (int j = 0; j <= n - 1; ++j) addmul(q, bb, W2[j], Bt[n - j]);
      finish(q, bb);
      W[n] = scale(q, w_gain);
      addmul(cross, cross_bb, W[0], W[n]);
      addmul(cross, cross_bb, W[n], W[0]);
      finish(cross, cross_bb);
      W2[n] = std::move(cross);
      M[n] = conv(W, Bt, n, 0, n);
    }
  }
}

MapTable::MapTable(const ModelDescriptor& m, const QuadExt& u, int order) {
  if (order < 0) throw std::invalid_argument("negative order");
  if (!has_integral_grading(m, u)) throw std::invalid_argument("no integral grading for this weight; use map_series_M");
  auto impl = std::make_shared<Impl>();
  impl->m = &m;
  impl->u = u;
  impl->N = order;
  impl->build();
  impl_ = impl;
}

const ModelDescriptor& MapTable::model() const { return *impl_->m; }
const QuadExt& MapTable::u() const { return impl_->u; }
int MapTable::order() const { return impl_->N; }

namespace {
void check_index(int n, int N) {
  if (n < 0 || n > N) throw std::out_of_range("order " + std::to_string(n) + " beyond table truncation " + std::to_string(N));
}
}  // namespace

QuadExt MapTable::M(int n) const {
  check_index(n, impl_->N);
  return impl_->value(impl_->M[n], n);
}

QuadExt MapTable::t(int n) const {
  check_index(n, impl_->N);
  return impl_->value(impl_->t[n], n);
}

QuadExt MapTable::prefactor(int n) const {
  check_index(n, impl_->N);
  if (impl_->W.empty()) return n == 0 ? 1 : 0;
  return impl_->value(impl_->W[n], n);
}

QuadExt MapTable::tpow(int k, int n) const {
  check_index(n, impl_->N);
  if (k < 0 || k > impl_->N) throw std::out_of_range("power beyond table");
  return impl_->value(impl_->S[k][n], n);
}

QuadExt MapTable::root(int k, int n) const {
  check_index(n, impl_->N);
  if (k < 0 || k > impl_->N) throw std::out_of_range("power beyond table");
  const Impl& I = *impl_;
  if (I.W.empty()) return I.value(I.S[k][n], n);
  return I.value(I.conv(I.S[k], I.W, n, k, n), n);
}

QuadExt MapTable::block_weight(int k) const {
  QuadExt bk(impl_->b.at(k));
  return impl_->W.empty() ? impl_->u * bk : bk;
}

QuadExt MapTable::root_sum(int n, const std::function<Integer(int)>& c) const {
  check_index(n, impl_->N);
  const Impl& I = *impl_;
  if (I.W.empty()) return I.value(I.block_sum(n, c), n);
  // sum_k c_k [g^n] t^k W = sum_j W_{n-j} sum_k c_k [g^j] t^k (+ c_0 W_n)
  std::vector<Zd> inner(n + 1);
  for (int j = 0; j <= n; ++j) inner[j] = I.block_sum(j, c);
  Integer c0 = c(0);
  inner[0].a = c0 * I.kappa;
  return I.value(I.conv(inner, I.W, n, 0, n), n);
}

std::shared_ptr<const MapTable> critical_table(ModelId id, int order) {
  static std::mutex mu;
  static std::map<ModelId, std::shared_ptr<const MapTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[id];
  if (!slot || slot->order() < order) {
    const ModelDescriptor& m = model(id);
    slot = std::make_shared<MapTable>(m, QuadExt(critical_constants(m).u_cr), order);
  }
  return slot;
}

FloatMapTable::FloatMapTable(const ModelDescriptor& m, int order) : m_(&m), order_(order) {
  if (order < 1) throw std::invalid_argument("float table needs order >= 1");
  const CriticalConstants& cc = critical_constants(m);
  const double u = to_double(cc.u_cr), g = to_double(cc.g_cr);
  tc_ = to_double(cc.t_cr);
  const BivariatePoly& P = block_polynomial(m);
  const int N = order;
  const bool ddsw = m.kind == SubstitutionKind::Ddsw;
  const int s = m.kind == SubstitutionKind::PowerThree ? 3 : 2;

  int imax = 0, jmax = 0;
  double lead = 0;
  for (auto& [ij, c] : P.terms) {
    imax = std::max(imax, ij.first);
    jmax = std::max(jmax, ij.second);
    if (ij.first == 0) lead += to_double(c) * ij.second;
  }
  // everything is a series in z = g/g_cr
  std::vector<std::vector<double>> T(imax + 1, std::vector<double>(N + 1, 0));
  std::vector<std::vector<double>> Bp(jmax + 1, std::vector<double>(N + 1, 0));
  T[0][0] = 1;
  for (auto& b : Bp) b[0] = 1;
  t_.assign(N + 1, 0);
  M_.assign(N + 1, 0);
  std::vector<double> Ms(N + 1, 0), M2(N + 1, 0), W2;
  double W0 = 1, gain = 0;
  if (ddsw) {
    W0 = (1 - std::sqrt(1 - 4 * u)) / (2 * u);
    gain = u / (1 - 2 * u * W0);
    W_.assign(N + 1, 0);
    W2.assign(N + 1, 0);
    W_[0] = W0;
    W2[0] = W0 * W0;
    M_[0] = W0;
    W_cr_ = 4.0 / 3.0;
  } else {
    M_[0] = Ms[0] = M2[0] = 1;
  }
  auto conv = [](const std::vector<double>& a, const std::vector<double>& b, int lo, int hi, int n) {
    double acc = 0;
    for (int i = lo; i <= hi; ++i) acc += a[i] * b[n - i];
    return acc;
  };
  std::vector<double> known(jmax + 1, 0);
  for (int n = 1; n <= N; ++n) {
    t_[n] = g * (ddsw ? W2[n - 1] : Ms[n - 1]);
    T[1][n] = t_[n];
    for (int i = 2; i <= imax; ++i) T[i][n] = conv(T[i - 1], t_, 1, n - 1, n);
    // (B^j)_n = known[j] + j * beta_n
    for (int j = 2; j <= jmax; ++j) known[j] = conv(Bp[j - 1], Bp[1], 1, n - 1, n) + known[j - 1];
    double rest = 0;
    for (auto& [ij, c] : P.terms) {
      auto [i, j] = ij;
      double v;
      if (i == 0)
        v = j == 0 ? 0 : known[j];
      else
        v = conv(T[i], Bp[j], 1, n, n);
      rest += to_double(c) * v;
    }
    double beta = -rest / lead;
    Bp[1][n] = beta;
    for (int j = 2; j <= jmax; ++j) Bp[j][n] = known[j] + j * beta;
    if (!ddsw) {
      M_[n] = u * beta;
      M2[n] = conv(M_, M_, 0, n, n);
      Ms[n] = s == 2 ? M2[n] : conv(M2, M_, 0, n, n);
    } else {
      // W = 1 + u W^2 B(t), solved for the new coefficient
      double cross = conv(W_, W_, 1, n - 1, n);
      W_[n] = gain * (cross + conv(W2, Bp[1], 0, n - 1, n));
      W2[n] = cross + 2 * W0 * W_[n];
      M_[n] = conv(W_, Bp[1], 0, n, n);
    }
  }
}

std::vector<double> FloatMapTable::law_Y(int k) const {
  if (k < 0) throw std::out_of_range("negative block size");
  const int N = order_;
  std::vector<double> out(N + 1, 0);
  if (k > N) return out;
  // (t/t_cr)^k computed as z^k A^k with A = t/(t_cr z)
  const int L = N - k;
  std::vector<double> A(L + 1, 0), R(L + 1, 0);
  for (int i = 0; i <= L; ++i) A[i] = t_[i + 1] / tc_;
  R[0] = 1;
  auto mul = [L](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> c(L + 1, 0);
    for (int i = 0; i <= L; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; i + j <= L; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
  };
  for (int e = k; e > 0; e >>= 1) {
    if (e & 1) R = mul(R, A);
    if (e > 1) A = mul(A, A);
  }
  if (W_.empty()) {
    for (int i = 0; i <= L; ++i) out[i + k] = R[i];
  } else {
    for (int n = k; n <= N; ++n) {
      double acc = 0;
      for (int j = 0; j <= n - k; ++j) acc += R[j] * W_[n - k - j];
      out[n] = acc / W_cr_;
    }
  }
  return out;
}

std::shared_ptr<const FloatMapTable> critical_float_table(ModelId id, int order) {
  static std::mutex mu;
  static std::map<ModelId, std::shared_ptr<const FloatMapTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[id];
  if (!slot || slot->order() < order) slot = std::make_shared<FloatMapTable>(model(id), order);
  return slot;
}

}  // namespace mapscale
