#include "mapscale/cli.hpp"

#include "mapscale/distance.hpp"
#include "mapscale/dualmeasure.hpp"
#include "mapscale/laws.hpp"
#include "mapscale/multifractal.hpp"
#include "mapscale/scaling.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mapscale::cli {
namespace {

using json = nlohmann::ordered_json;
using Cell = std::variant<std::monostate, long long, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  std::vector<Table> tables;
  json extra = json::object();
};

struct Args {
  std::string format = "csv";
  bool json_flag = false;
  std::string output;
  int precision = 15;

  std::string model = "quad";
  int digits = 30;
  int n = 0, k = 0, p = 2;
  int n_max = 0, exact_order = 200;
  bool rescale = false, scaled = false;
  double lmax = 3;
  int steps = 100;
  std::string alpha_str = "3/2";
  std::string method = "best";
  std::string which;
  double xmin = 0.01, xmax = 5;
  double rmin = 0.05, rmax = 4;
  double gamma = std::sqrt(8.0 / 3.0);
  bool dual = false, expected = false;
  std::optional<double> lo, hi;
  double alpha = 1.5, D = 3 / std::cbrt(4.0), area = 1;
  std::vector<double> u_grid{0.5, 1, 2};
  std::vector<double> moments{-0.5, 0.2, 0.4};
  long samples = 100000, ks_samples = 10000;
  std::uint64_t seed = 0;
  std::string figure, out_dir;
  std::vector<int> ns, ks;
};

std::string render(double v, int prec) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

json number(double v, int prec) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(render(v, prec));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string cell_text(const Cell& c, int prec) {
  struct V {
    int prec;
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return render(v, prec); }
    std::string operator()(const std::string& s) const { return csv_field(s); }
  };
  return std::visit(V{prec}, c);
}

json cell_json(const Cell& c, int prec) {
  struct V {
    int prec;
    json operator()(std::monostate) const { return nullptr; }
    json operator()(long long v) const { return v; }
    json operator()(double v) const { return number(v, prec); }
    json operator()(const std::string& s) const { return s; }
  };
  return std::visit(V{prec}, c);
}

json resolved_params(const CLI::App* sc) {
  json p = json::object();
  for (const CLI::Option* o : sc->get_options()) {
    std::string name = o->get_name();
    if (name == "--help") continue;
    name.erase(0, name.find_first_not_of('-'));
    if (o->get_expected_max() == 0) {
      p[name] = o->count() > 0;
    } else if (o->count() > 0) {
      const auto& r = o->results();
      if (r.size() == 1 && o->get_expected_max() <= 1) p[name] = r.front();
      else p[name] = r;
    } else {
      std::string d = o->get_default_str();
      if (o->get_expected_max() > 1) {
        json arr = json::array();
        std::string body = d.size() >= 2 && (d.front() == '[' || d.front() == '{') ? d.substr(1, d.size() - 2) : d;
        std::stringstream ss(body);
        for (std::string item; std::getline(ss, item, ',');)
          if (!item.empty()) arr.push_back(item);
        p[name] = arr;
      } else {
        p[name] = d.empty() ? json(nullptr) : json(d);
      }
    }
  }
  return p;
}

json header_json(const std::string& command, const json& params) {
  return json{{"tool", "mapscale"}, {"version", kVersion}, {"command", command}, {"params", params}};
}

void write_csv(std::ostream& os, const std::string& command, const json& params, const Report& r, int prec) {
  os << "# tool: mapscale " << kVersion << "\n";
  os << "# command: " << command << "\n";
  os << "# params: " << params.dump() << "\n";
  for (auto& [key, v] : r.extra.items()) os << "# " << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  for (const Table& t : r.tables) {
    if (r.tables.size() > 1) os << "# table: " << t.name << "\n";
    for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
    os << "\n";
    for (const auto& row : t.rows) {
      for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i], prec);
      os << "\n";
    }
  }
}

void write_json(std::ostream& os, const std::string& command, const json& params, const Report& r, int prec) {
  json j = header_json(command, params);
  for (auto& [key, v] : r.extra.items()) j[key] = v;
  json tables = json::array();
  for (const Table& t : r.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json jr = json::array();
      for (const Cell& c : row) jr.push_back(cell_json(c, prec));
      rows.push_back(std::move(jr));
    }
    tables.push_back(json{{"name", t.name}, {"columns", t.columns}, {"rows", std::move(rows)}});
  }
  j["tables"] = std::move(tables);
  os << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- laws

enum class Law { X, X2, Y };

struct LawRows {
  Table table;
  double deviation = 0;
};

double overlay(Law law, const ScalingParams& sp, double x) {
  switch (law) {
    case Law::X: return density_tau(sp, x);
    case Law::X2: return density_sigma(sp, x);
    case Law::Y: return density_wp(sp, x);
  }
  return 0;
}

const char* overlay_name(Law law) { return law == Law::X ? "tau" : law == Law::X2 ? "sigma" : "wp"; }

Window window_of(Law law) { return law == Law::X ? kWindowX : law == Law::X2 ? kWindowX2 : kWindowY; }

LawRows law_rows(Law law, const DistributionTable& d, bool rescale, const std::string& name) {
  ScalingParams sp(d.alpha, d.D);
  LawRows out;
  Table& t = out.table;
  t.name = name;
  t.columns = {law == Law::Y ? "n" : "k", "prob_exact", "prob"};
  double scale = 1, factor = 1;
  if (rescale) {
    t.columns.insert(t.columns.end(), {law == Law::Y ? "y" : "x", "scaled", overlay_name(law)});
    if (law == Law::Y) {
      scale = std::pow(d.index, d.alpha);
      factor = scale;
    } else {
      scale = std::pow(d.index, 1 / d.alpha);
      factor = law == Law::X ? d.index : scale;
    }
  }
  Window w = window_of(law);
  for (size_t i = 0; i < d.support.size(); ++i) {
    std::vector<Cell> row{static_cast<long long>(d.support[i]),
                          i < d.exact.size() ? Cell(d.exact[i].str()) : Cell(), d.prob[i]};
    if (rescale) {
      double x = d.support[i] / scale, s = factor * d.prob[i];
      row.emplace_back(x);
      row.emplace_back(s);
      if (x > 0) {
        double o = overlay(law, sp, x);
        row.emplace_back(o);
        if (x >= w.lo && x <= w.hi) out.deviation = std::max(out.deviation, std::fabs(s - o));
      } else {
        row.emplace_back();
      }
    }
    t.rows.push_back(std::move(row));
  }
  return out;
}

Table overlay_table(Law law, const ScalingParams& sp, double lo, double hi, int steps) {
  Table t{overlay_name(law), {law == Law::Y ? "y" : "x", overlay_name(law)}, {}};
  for (int i = 0; i <= steps; ++i) {
    double x = lo + (hi - lo) * i / steps;
    t.rows.push_back({x, overlay(law, sp, x)});
  }
  return t;
}

void law_extra(Report& r, const DistributionTable& d) {
  r.extra["model"] = d.model;
  r.extra["alpha"] = d.alpha;
  r.extra["D"] = d.D;
}

Report cmd_law(Law law, const Args& a) {
  const ModelDescriptor& m = model(a.model);
  DistributionTable d = law == Law::X ? law_X(m, a.n) : law == Law::X2 ? law_X2(m, a.n) : law_Y(m, a.k, a.n_max, a.exact_order);
  Report r;
  law_extra(r, d);
  if (law == Law::Y) r.extra["tail_bound"] = number(d.tail_bound, a.precision);
  LawRows lr = law_rows(law, d, a.rescale, "law");
  if (a.rescale) r.extra["sup_deviation"] = number(lr.deviation, a.precision);
  r.tables.push_back(std::move(lr.table));
  return r;
}

struct LaplaceRows {
  Table table;
  double deviation = 0;
};

LaplaceRows laplace_rows(const ModelDescriptor& m, int k, double lmax, int steps, bool scaled, const std::string& name) {
  ScalingParams sp = ScalingParams::of(m);
  LaplaceRows out{{name, {"lambda", "laplace", "limit", "difference"}, {}}, 0};
  for (int i = 0; i <= steps; ++i) {
    double l = lmax * i / steps;
    double v = laplace_Y(m, k, l, scaled);
    double lim = std::exp(-sp.D * std::pow(l, 1 / sp.alpha) * (scaled ? 1 : k));
    out.deviation = std::max(out.deviation, std::fabs(v - lim));
    out.table.rows.push_back({l, v, lim, v - lim});
  }
  return out;
}

Report cmd_laplace(const Args& a) {
  const ModelDescriptor& m = model(a.model);
  Report r;
  r.extra["model"] = m.name;
  LaplaceRows lr = laplace_rows(m, a.k, a.lmax, a.steps, a.scaled, "laplace");
  r.extra["sup_difference"] = number(lr.deviation, a.precision);
  r.tables.push_back(std::move(lr.table));
  return r;
}

Report cmd_ratio(const Args& a) {
  const ModelDescriptor& m = model(a.model);
  double f = ratio_Rp(m, a.p, a.n, a.k, RatioMode::Formula);
  double c = ratio_Rp(m, a.p, a.n, a.k, RatioMode::Coefficients);
  Report r;
  r.extra["model"] = m.name;
  r.tables.push_back({"ratio",
                      {"p", "n", "k", "formula", "coefficients", "relative_error"},
                      {{static_cast<long long>(a.p), static_cast<long long>(a.n), static_cast<long long>(a.k), f, c,
                        c / f - 1}}});
  return r;
}

// ---------------------------------------------------------------- constants

Report cmd_constants(const Args& a) {
  const ModelDescriptor& m = model(a.model);
  const CriticalConstants& c = critical_constants(m);
  Report r;
  Table t{"constants", {"name", "exact", "value"}, {}};
  json floats = json::object();
  r.extra["model"] = m.name;
  auto add = [&](const std::string& name, const Radical& v) {
    std::string exact = v.str(), dec = v.decimal(a.digits);
    t.rows.push_back({name, exact, dec});
    r.extra[name] = exact;
    floats[name] = dec;
  };
  add("alpha", Radical(c.alpha));
  add("u_cr", Radical(c.u_cr));
  add("g_cr", Radical(c.g_cr));
  add("t_cr", Radical(c.t_cr));
  add("B_tcr", Radical(c.B_tcr));
  add("Bp_tcr", Radical(c.Bp_tcr));
  add("K_B", c.K_B);
  add("C", c.C);
  add("D", c.D);
  add("u_cr_alternative", Radical(alternative_u_cr(m)));
  add("gamma_S", Radical(string_susceptibility(c.alpha)));
  add("gamma_S_dual", Radical(string_susceptibility_dual(c.alpha)));
  r.extra["float"] = floats;
  r.tables.push_back(std::move(t));
  return r;
}

// ---------------------------------------------------------------- scaling

double parse_number(const std::string& s) {
  if (s.find('/') != std::string::npos) return to_double(parse_rational(s));
  size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not a number: " + s);
  return v;
}

Report cmd_scaling_fn(const Args& a) {
  double alpha = parse_number(a.alpha_str);
  static const std::map<std::string, WrightMethod> methods{
      {"series", WrightMethod::Series}, {"integral", WrightMethod::Integral},
      {"airy", WrightMethod::Airy}, {"best", WrightMethod::Best}};
  WrightMethod wm = methods.at(a.method);
  if (wm == WrightMethod::Airy && std::fabs(alpha - 1.5) > 1e-15)
    throw std::domain_error("the Airy form requires alpha = 3/2");
  Report r;
  r.extra["alpha"] = alpha;
  Table t{"scaling_function", {"x", "S"}, {}};
  for (int i = 0; i <= a.steps; ++i) {
    double x = a.xmin + (a.xmax - a.xmin) * i / a.steps;
    t.rows.push_back({x, wright_S(alpha, x, wm)});
  }
  r.tables.push_back(std::move(t));
  return r;
}

Report cmd_density(const Args& a) {
  const ModelDescriptor& m = model(a.model);
  ScalingParams sp = ScalingParams::of(m);
  Law law = a.which == "tau" ? Law::X : a.which == "sigma" ? Law::X2 : Law::Y;
  Report r;
  r.extra["model"] = m.name;
  r.extra["alpha"] = sp.alpha;
  r.extra["D"] = sp.D;
  Table t = overlay_table(law, sp, a.xmin, a.xmax, a.steps);
  t.columns = {"x", "density"};
  r.tables.push_back(std::move(t));
  return r;
}

// ---------------------------------------------------------------- distance

Report cmd_distance(const Args& a) {
  std::function<double(double)> f;
  if (a.which == "rho0") f = [](double r) { return rho0(r); };
  else if (a.which == "rhoblock") f = [](double r) { return rho_block_closed(r); };
  else if (a.which == "conv") f = [](double r) { return rho_block_conv(r); };
  else f = [](double r) { return rho_block_stuffed(r); };
  Report r;
  Table t{a.which, {"r", "value"}, {}};
  for (int i = 0; i <= a.steps; ++i) {
    double x = a.rmin + (a.rmax - a.rmin) * i / a.steps;
    t.rows.push_back({x, f(x)});
  }
  r.tables.push_back(std::move(t));
  return r;
}

// ---------------------------------------------------------------- spectra

Table curve_table(const SpectrumCurve& c, const std::string& name, const std::string& xname, const std::string& yname) {
  Table t{name, {xname, yname}, {}};
  for (auto [x, y] : c.samples) t.rows.push_back({x, y});
  return t;
}

SpectrumCurve default_curve(const std::string& which, double g, bool expected, std::optional<double> lo,
                            std::optional<double> hi, int steps) {
  if (which == "lq")
    return spectrum(expected ? SpectrumKind::LqExpected : SpectrumKind::LqAlmostSure, g, lo.value_or(-3),
                    hi.value_or(3), steps);
  if (which == "dim")
    return spectrum(expected ? SpectrumKind::DimExpected : SpectrumKind::DimAlmostSure, g, lo.value_or(0),
                    hi.value_or((2 + g) * (2 + g) / 2 + 1), steps);
  if (which == "qball-lq") {
    auto [a, b] = qball_q_range(g);
    double w = b - a;
    return spectrum(SpectrumKind::QuantumBallLq, g, lo.value_or(a - w / 2), hi.value_or(b + w / 2), steps);
  }
  auto [a, b] = qball_beta_range(g);
  double w = b - a;
  return spectrum(SpectrumKind::QuantumBallDim, g, lo.value_or(std::max(0.0, a - w / 2)), hi.value_or(b + w / 2),
                  steps);
}

Report cmd_spectra(const Args& a) {
  double g = a.dual ? dual_gamma(a.gamma) : a.gamma;
  SpectrumCurve c = default_curve(a.which, g, a.expected, a.lo, a.hi, a.steps);
  bool lq = a.which == "lq" || a.which == "qball-lq";
  Report r;
  r.extra["gamma"] = number(g, a.precision);
  json b = json::array();
  for (double x : c.boundaries) b.push_back(number(x, a.precision));
  r.extra["boundaries"] = b;
  r.tables.push_back(curve_table(c, a.which, lq ? "q" : "beta", lq ? "tau" : "f"));
  return r;
}

// ---------------------------------------------------------------- monte carlo

Report cmd_mc_dual(const Args& a) {
  if (a.samples < kBatches || a.ks_samples < 2) throw std::invalid_argument("too few samples");
  std::vector<double> masses = sample_dual_masses(a.area, a.D, a.alpha, a.samples, a.seed);
  Report r;
  Table t{"checks", {"check", "parameter", "estimate", "se", "target", "z"}, {}};
  json est = json::array(), tgt = json::array(), z = json::array(), labels = json::array();
  auto push = [&](const std::string& kind, double param, const McCheck& c) {
    t.rows.push_back({kind, param, c.estimate, c.se, c.target, c.z});
    labels.push_back(kind + "(" + render(param, 6) + ")");
    est.push_back(number(c.estimate, a.precision));
    tgt.push_back(number(c.target, a.precision));
    z.push_back(number(c.z, a.precision));
  };
  for (double u : a.u_grid) push("laplace", u, mc_laplace(masses, u, a.area, a.D, a.alpha));
  for (double q : a.moments) push("moment", q, mc_moment(masses, q, a.area, a.D, a.alpha));
  std::vector<double> unit = sample_dual_masses(1, a.D, a.alpha, a.ks_samples, a.seed ^ 0x9e3779b97f4a7c15ULL);
  KsResult ks = ks_against_wp(unit, a.D, a.alpha);
  r.extra["checks"] = labels;
  r.extra["estimates"] = est;
  r.extra["targets"] = tgt;
  r.extra["z_scores"] = z;
  r.extra["ks_statistic"] = number(ks.statistic, a.precision);
  r.extra["ks_p"] = number(ks.p_value, a.precision);
  r.tables.push_back(std::move(t));
  return r;
}

// ---------------------------------------------------------------- figures

bool decreasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

json rounded(const std::vector<double>& v, int prec) {
  json j = json::array();
  for (double x : v) j.push_back(number(x, prec));
  return j;
}

std::vector<int> pick(const std::vector<int>& requested, std::vector<int> defaults) {
  return requested.empty() ? defaults : requested;
}

void collapse_figure(Report& r, const Args& a, const ModelDescriptor& m, Law law, const std::vector<int>& sizes,
                     int n_max, double overlay_hi) {
  ScalingParams sp = ScalingParams::of(m);
  std::vector<double> devs;
  for (int s : sizes) {
    DistributionTable d = law == Law::X ? law_X(m, s) : law == Law::X2 ? law_X2(m, s) : law_Y(m, s, n_max, n_max);
    LawRows lr = law_rows(law, d, true, std::string(law == Law::Y ? "k=" : "n=") + std::to_string(s));
    devs.push_back(lr.deviation);
    r.tables.push_back(std::move(lr.table));
  }
  r.tables.push_back(overlay_table(law, sp, overlay_hi / 500, overlay_hi, 500));
  Window w = window_of(law);
  json man{{"model", m.name},
           {"law", law == Law::X ? "X" : law == Law::X2 ? "X2" : "Y"},
           {law == Law::Y ? "k" : "n", sizes},
           {"window", {w.lo, w.hi}},
           {"sup_deviation", rounded(devs, a.precision)},
           {"monotone", decreasing(devs)}};
  if (law == Law::Y) man["n_max"] = n_max;
  r.extra["manifest"].push_back(std::move(man));
}

Report fig_collapse(const Args& a, Law law) {
  Report r;
  r.extra["manifest"] = json::array();
  const ModelDescriptor& m = model("quad");
  if (law == Law::Y) collapse_figure(r, a, m, law, pick(a.ks, {5, 10, 25, 40}), 200, 20);
  else collapse_figure(r, a, m, law, pick(a.ns, {30, 50, 100, 200}), 0, 5);
  return r;
}

Report fig_bicubic(const Args& a) {
  Report r;
  r.extra["manifest"] = json::array();
  const ModelDescriptor& m = model("bicubic");
  collapse_figure(r, a, m, Law::X2, pick(a.ns, {100, 200, 300, 400}), 0, 5);
  collapse_figure(r, a, m, Law::Y, pick(a.ks, {20, 40, 65, 80}), 400, 20);
  return r;
}

Report fig_laplace(const Args& a) {
  Report r;
  const ModelDescriptor& m = model("quad");
  std::vector<int> ks = pick(a.ks, {5, 10, 25, 40});
  std::vector<double> raw, scaled;
  for (int k : ks) {
    LaplaceRows u = laplace_rows(m, k, 0.5, a.steps, false, "k=" + std::to_string(k));
    LaplaceRows s = laplace_rows(m, k, 3, a.steps, true, "k=" + std::to_string(k) + ",scaled");
    raw.push_back(u.deviation);
    scaled.push_back(s.deviation);
    r.tables.push_back(std::move(u.table));
    r.tables.push_back(std::move(s.table));
  }
  r.extra["manifest"] = json{{"model", m.name},
                             {"k", ks},
                             {"lambda_max", {0.5, 3}},
                             {"sup_difference", rounded(raw, a.precision)},
                             {"sup_difference_scaled", rounded(scaled, a.precision)},
                             {"monotone", decreasing(scaled)}};
  return r;
}

Report fig_profiles(const Args& a) {
  Report r;
  Table t{"profiles", {"r", "rho_block", "rho0", "rho_block_conv"}, {}};
  double sup = 0;
  const double lo = 0.02, hi = 4;
  for (int i = 0; i <= a.steps; ++i) {
    double x = lo + (hi - lo) * i / a.steps;
    double b = rho_block_closed(x), c = rho_block_conv(x);
    if (x >= 0.2 && x <= 3) sup = std::max(sup, std::fabs(b - c));
    t.rows.push_back({x, b, rho0(x), c});
  }
  r.tables.push_back(std::move(t));
  r.extra["manifest"] = json{{"r_range", {lo, hi}},
                             {"sup_conv_minus_closed", number(sup, a.precision)},
                             {"small_r_constant", number(rho_block_small_r_constant(), a.precision)}};
  return r;
}

Report fig_spectra(const Args& a, double g) {
  Report r;
  SpectrumCurve tau = default_curve("lq", g, false, std::nullopt, std::nullopt, a.steps);
  SpectrumCurve f = default_curve("dim", g, false, 0.0, (2 + g) * (2 + g) / 2, a.steps);
  r.tables.push_back(curve_table(tau, "tau", "q", "tau"));
  r.tables.push_back(curve_table(f, "f", "beta", "f"));
  r.extra["manifest"] = json{{"gamma", number(g, a.precision)},
                             {"tau_boundaries", rounded(tau.boundaries, a.precision)},
                             {"f_boundaries", rounded(f.boundaries, a.precision)}};
  return r;
}

Report fig_qball(const Args& a, bool lq) {
  Report r;
  json man = json::array();
  for (double g : {std::sqrt(8.0 / 3.0), std::sqrt(6.0)}) {
    SpectrumCurve c = default_curve(lq ? "qball-lq" : "qball-dim", g, false, std::nullopt, std::nullopt, a.steps);
    std::string name = g < 2 ? "gamma" : "gamma_dual";
    r.tables.push_back(curve_table(c, name, lq ? "q" : "beta", lq ? "tau" : "f"));
    json e{{"gamma", number(g, a.precision)}, {"boundaries", rounded(c.boundaries, a.precision)}};
    if (!lq) {
      double mx = -INFINITY;
      for (auto [x, y] : c.samples) mx = std::max(mx, y);
      e["max_f"] = number(mx, a.precision);
    }
    man.push_back(std::move(e));
  }
  r.extra["manifest"] = man;
  return r;
}

const std::map<std::string, std::function<Report(const Args&)>>& figures() {
  static const std::map<std::string, std::function<Report(const Args&)>> reg{
      {"fig-proba1x", [](const Args& a) { return fig_collapse(a, Law::X); }},
      {"fig-proba2x", [](const Args& a) { return fig_collapse(a, Law::X2); }},
      {"fig-probay", [](const Args& a) { return fig_collapse(a, Law::Y); }},
      {"fig-expoflambda", fig_laplace},
      {"fig-profils", fig_profiles},
      {"fig-spectra", [](const Args& a) { return fig_spectra(a, std::sqrt(8.0 / 3.0)); }},
      {"fig-spectra-dual", [](const Args& a) { return fig_spectra(a, std::sqrt(6.0)); }},
      {"fig-ftilde", [](const Args& a) { return fig_qball(a, false); }},
      {"fig-tautilde", [](const Args& a) { return fig_qball(a, true); }},
      {"fig-probabicubic", fig_bicubic},
  };
  return reg;
}

Report cmd_reproduce(const Args& a) {
  auto it = figures().find(a.figure);
  if (it == figures().end()) throw std::invalid_argument("unknown figure id '" + a.figure + "'");
  Report r = it->second(a);
  json e{{"figure", a.figure}};
  e.update(r.extra);
  r.extra = std::move(e);
  return r;
}

std::vector<std::string> model_names() {
  std::vector<std::string> v;
  for (ModelId id : all_models()) v.push_back(model(id).name);
  return v;
}

std::vector<std::string> figure_names() {
  std::vector<std::string> v;
  for (auto& [k, f] : figures()) v.push_back(k);
  return v;
}

void add_common(CLI::App* sc, Args& a) {
  sc->add_option("--format", a.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  sc->add_flag("--json", a.json_flag, "same as --format json");
  sc->add_option("-o,--output", a.output, "write to this file instead of stdout");
  sc->add_option("--precision", a.precision, "significant digits of floats")->check(CLI::Range(1, 17));
}

void emit(std::ostream& os, bool as_json, const std::string& command, const json& params, const Report& r, int prec) {
  if (as_json) write_json(os, command, params, r, prec);
  else write_csv(os, command, params, r, prec);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Args a;
  CLI::App app{"Block-weighted planar map scaling laws and dual Liouville measures", "mapscale"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::vector<std::pair<CLI::App*, std::function<Report(const Args&)>>> commands;
  auto sub = [&](const std::string& name, const std::string& desc, std::function<Report(const Args&)> fn) {
    CLI::App* sc = app.add_subcommand(name, desc);
    add_common(sc, a);
    commands.emplace_back(sc, std::move(fn));
    return sc;
  };
  auto models = CLI::IsMember(model_names());

  CLI::App* sc = sub("constants", "exact critical constants of a model", cmd_constants);
  sc->add_option("model", a.model, "quad, ddsw or bicubic")->required()->check(models);
  sc->add_option("--digits", a.digits, "decimal digits of the float renderings")->check(CLI::Range(1, 1000));

  for (auto [name, law] : {std::pair{"law-x", Law::X}, std::pair{"law-x2", Law::X2}}) {
    sc = sub(name, law == Law::X ? "law of the root block size" : "law of the block holding the root, doubly rooted",
             [law](const Args& x) { return cmd_law(law, x); });
    sc->add_option("--model", a.model)->check(models);
    sc->add_option("--n", a.n, "map size")->required()->check(CLI::Range(1, 100000));
    sc->add_flag("--rescale", a.rescale, "add rescaled columns and the limit density");
  }

  sc = sub("law-y", "law of the map size given the root block size", [](const Args& x) { return cmd_law(Law::Y, x); });
  sc->add_option("--model", a.model)->check(models);
  sc->add_option("--k", a.k, "root block size")->required()->check(CLI::Range(0, 100000));
  sc->add_option("--nmax", a.n_max, "last map size, 0 for automatic")->check(CLI::Range(0, 1000000));
  sc->add_option("--exact-order", a.exact_order, "map sizes computed exactly")->check(CLI::Range(0, 2000));
  sc->add_flag("--rescale", a.rescale, "add rescaled columns and the limit density");

  sc = sub("laplace", "Laplace transform of the map size given the root block", cmd_laplace);
  sc->add_option("--model", a.model)->check(models);
  sc->add_option("--k", a.k)->required()->check(CLI::Range(1, 100000));
  sc->add_option("--lmax", a.lmax)->check(CLI::NonNegativeNumber);
  sc->add_option("--steps", a.steps)->check(CLI::Range(1, 100000));
  sc->add_flag("--scaled", a.scaled, "use lambda n / k^alpha");

  sc = sub("ratio", "ratio of marked partition functions", cmd_ratio);
  sc->add_option("--model", a.model)->check(models);
  sc->add_option("--p", a.p)->check(CLI::Range(2, 100));
  sc->add_option("--n", a.n)->required()->check(CLI::Range(1, 100000));
  sc->add_option("--k", a.k)->required()->check(CLI::Range(1, 100000));

  sc = sub("scaling-fn", "Wright function S_{1/alpha}", cmd_scaling_fn);
  sc->add_option("--alpha", a.alpha_str, "alpha in (1, 2], decimal or p/q");
  sc->add_option("--method", a.method)->check(CLI::IsMember({"series", "integral", "airy", "best"}));
  sc->add_option("--xmin", a.xmin);
  sc->add_option("--xmax", a.xmax);
  sc->add_option("--steps", a.steps)->check(CLI::Range(1, 1000000));

  sc = sub("density", "limit densities tau, sigma and wp", cmd_density);
  sc->add_option("which", a.which)->required()->check(CLI::IsMember({"tau", "sigma", "wp"}));
  sc->add_option("--model", a.model)->check(models);
  sc->add_option("--xmin", a.xmin)->check(CLI::PositiveNumber);
  sc->add_option("--xmax", a.xmax)->check(CLI::PositiveNumber);
  sc->add_option("--steps", a.steps)->check(CLI::Range(1, 1000000));

  sc = sub("distance-profile", "two-point distance profiles", cmd_distance);
  sc->add_option("--which", a.which)->required()->check(CLI::IsMember({"rho0", "rhoblock", "conv", "stuffed"}));
  sc->add_option("--rmin", a.rmin)->check(CLI::PositiveNumber);
  sc->add_option("--rmax", a.rmax)->check(CLI::PositiveNumber);
  sc->add_option("--steps", a.steps)->check(CLI::Range(1, 100000));

  sc = sub("spectra", "multifractal spectra of Liouville measures", cmd_spectra);
  sc->add_option("--gamma", a.gamma, "gamma in (0, 2), or gamma' > 2")
      ->check(CLI::PositiveNumber)
      ->default_str(render(a.gamma, 17));
  sc->add_option("--which", a.which)->required()->check(CLI::IsMember({"lq", "dim", "qball-lq", "qball-dim"}));
  sc->add_flag("--dual", a.dual, "use gamma' = 4/gamma");
  sc->add_flag("--expected", a.expected, "expected instead of almost sure spectrum");
  sc->add_option("--lo", a.lo, "first abscissa");
  sc->add_option("--hi", a.hi, "last abscissa");
  sc->add_option("--steps", a.steps)->check(CLI::Range(1, 1000000));

  sc = sub("mc-dual", "Monte Carlo check of the dual measure", cmd_mc_dual);
  sc->add_option("--alpha", a.alpha)->check(CLI::Range(1.0, 2.0));
  sc->add_option("--D", a.D)->check(CLI::PositiveNumber)->default_str(render(a.D, 17));
  sc->add_option("--area", a.area)->check(CLI::PositiveNumber);
  sc->add_option("--u-grid", a.u_grid)->expected(1, -1);
  sc->add_option("--moments", a.moments)->expected(1, -1);
  sc->add_option("--samples", a.samples)->check(CLI::Range(20L, 1000000000L));
  sc->add_option("--ks-samples", a.ks_samples)->check(CLI::Range(2L, 100000000L));
  sc->add_option("--seed", a.seed)->required();

  sc = sub("reproduce", "data behind a figure", cmd_reproduce);
  sc->add_option("figure", a.figure)->required()->check(CLI::IsMember(figure_names()));
  sc->add_option("--out", a.out_dir, "directory for the data file and manifest.json");
  sc->add_option("--n", a.ns, "map sizes")->expected(1, -1);
  sc->add_option("--k", a.ks, "block sizes")->expected(1, -1);
  sc->add_option("--steps", a.steps)->check(CLI::Range(1, 100000));
  CLI::App* reproduce = sc;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  for (auto& [cmd, fn] : commands) {
    if (!cmd->parsed()) continue;
    std::string name = cmd->get_name();
    try {
      bool as_json = a.json_flag || a.format == "json";
      json params = resolved_params(cmd);
      params["format"] = as_json ? "json" : "csv";
      Report r = fn(a);
      if (cmd == reproduce && !a.out_dir.empty()) {
        std::filesystem::create_directories(a.out_dir);
        std::filesystem::path data = std::filesystem::path(a.out_dir) / (a.figure + (as_json ? ".json" : ".csv"));
        std::ofstream f(data);
        emit(f, as_json, name, params, r, a.precision);
        json man = header_json(name, params);
        man["figure"] = a.figure;
        man["data"] = data.filename().string();
        man["manifest"] = r.extra["manifest"];
        std::ofstream mf(std::filesystem::path(a.out_dir) / "manifest.json");
        mf << man.dump(2) << "\n";
        if (!f || !mf) throw std::runtime_error("cannot write to " + a.out_dir);
        out << data.string() << "\n";
      } else if (!a.output.empty()) {
        std::ofstream f(a.output);
        emit(f, as_json, name, params, r, a.precision);
        if (!f) throw std::runtime_error("cannot write " + a.output);
      } else {
        emit(out, as_json, name, params, r, a.precision);
      }
      return 0;
    } catch (const std::exception& e) {
      err << json{{"error", e.what()}, {"command", name}}.dump() << "\n";
      return 1;
    }
  }
  return 2;
}

}  // namespace mapscale::cli
