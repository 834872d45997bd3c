#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "grwalk/experiment/config.hpp"
#include "grwalk/grwalk.hpp"

namespace grwalk::experiment {

using nlohmann::json;

struct CurveRow {
  std::string series;
  std::size_t n = 0;
  double value = 0.0;
};

struct RatioRow {
  std::string series;
  std::size_t path = 0;
  std::size_t checkpoint = 0;
  double max_ratio = 0.0;
};

struct ScenarioResult {
  std::vector<CurveRow> curves;
  std::vector<RatioRow> ratios;
  json thresholds = json::object();
  json results = json::object();
  bool passed = false;
  /// Largest squared norm lost to window clamping.
  double leaked_mass = 0.0;
};

// ---------------------------------------------------------------------------
// Descriptors

/// "S3".."S6", "C<m>", "D<m>", "Q8".
inline FiniteGroup make_group(const std::string& desc) {
  auto order = [&](std::size_t from) {
    const std::string digits = desc.substr(from);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 3) {
      throw UsageError("unknown group '" + desc + "'");
    }
    return std::stoi(digits);
  };
  if (desc == "Q8") return quaternion_group();
  if (!desc.empty() && desc[0] == 'S') return symmetric_group(order(1));
  if (!desc.empty() && desc[0] == 'C') return cyclic_group(order(1));
  if (!desc.empty() && desc[0] == 'D') return dihedral_group(order(1));
  throw UsageError("unknown group '" + desc + "'");
}

/// Terms trivial, sign, standard, quaternion, character:<j>, joined by '+'.
inline FiniteDimRep make_rep(const FiniteGroup& g, const std::string& desc) {
  const auto terms = split(desc, '+');
  if (terms.empty()) throw UsageError("empty representation descriptor");
  auto one = [&](const std::string& t) {
    if (t == "trivial") return trivial_rep(g);
    if (t == "sign") return sign_character(g);
    if (t == "standard") return standard_rep(g);
    if (t == "quaternion") return quaternion_rep(g);
    if (t.rfind("character:", 0) == 0) {
      if (g.name().front() != 'C') throw UsageError("character:<j> needs a cyclic group");
      return cyclic_character(g, static_cast<int>(Config::parse_text("j = " + t.substr(10)).get_int("j")));
    }
    throw UsageError("unknown representation '" + t + "'");
  };
  FiniteDimRep rep = one(terms.front());
  for (std::size_t i = 1; i < terms.size(); ++i) rep = direct_sum(rep, one(terms[i]));
  return rep;
}

/// "e<k>" (1-based basis vector) or comma-separated real coordinates.
inline CVector make_vector(const std::string& desc, int dim) {
  if (desc.size() > 1 && desc[0] == 'e' && desc.find(',') == std::string::npos) {
    const int k = static_cast<int>(Config::parse_text("k = " + desc.substr(1)).get_int("k"));
    if (k < 1 || k > dim) throw UsageError("basis vector " + desc + " outside dimension " + std::to_string(dim));
    return basis_vector(dim, k - 1);
  }
  const auto parts = split(desc, ',');
  if (static_cast<int>(parts.size()) != dim) {
    throw UsageError("vector '" + desc + "' needs " + std::to_string(dim) + " coordinates");
  }
  CVector x(dim);
  for (int i = 0; i < dim; ++i) {
    x(i) = Config::parse_text("x = " + parts[i]).get_double("x", 0.0);
  }
  return x;
}

inline std::pair<std::string, Rational> split_atom(const std::string& line) {
  const auto space = line.find_last_of(" \t");
  if (space == std::string::npos) throw UsageError("atom line '" + line + "' needs '<atom> <weight>'");
  return {trim(line.substr(0, space)), parse_weight(trim(line.substr(space + 1)))};
}

inline ProbMeasure<int, Rational> make_finite_measure(const FiniteGroup& g, const std::vector<std::string>& lines) {
  if (lines.empty()) throw UsageError("measure needs at least one 'atom = <label> <weight>' line");
  std::vector<int> atoms;
  std::vector<Rational> weights;
  for (const auto& line : lines) {
    auto [label, w] = split_atom(line);
    atoms.push_back(g.index_of(label));
    weights.push_back(w);
  }
  return ProbMeasure<int, Rational>(atoms, weights);
}

inline ProbMeasure<std::int64_t, double> make_z_measure(const std::vector<std::string>& lines) {
  if (lines.empty()) throw UsageError("measure needs at least one 'atom = <integer> <weight>' line");
  std::vector<std::int64_t> atoms;
  std::vector<Rational> weights;
  for (const auto& line : lines) {
    auto [label, w] = split_atom(line);
    atoms.push_back(Config::parse_text("k = " + label).get_int("k"));
    weights.push_back(w);
  }
  const ProbMeasure<std::int64_t, Rational> exact(atoms, weights);
  std::vector<double> dw;
  for (const auto& w : exact.weights()) dw.push_back(to_double(w));
  return ProbMeasure<std::int64_t, double>(exact.atoms(), dw);
}

template <class Atom>
ProbMeasure<Atom, double> to_double_measure(const ProbMeasure<Atom, Rational>& mu) {
  std::map<Atom, double> acc;
  for (std::size_t i = 0; i < mu.size(); ++i) acc[mu.atoms()[i]] = to_double(mu.weights()[i]);
  return ProbMeasure<Atom, double>::from_accumulated(acc);
}

inline json measure_json(const FiniteGroup& g, const ProbMeasure<int, Rational>& mu) {
  json out = json::array();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    out.push_back({{"atom", g.label(mu.atoms()[i])}, {"weight", to_string(mu.weights()[i])}});
  }
  return out;
}

inline std::size_t positive_size(const Config& c, const std::string& key, std::int64_t fallback) {
  const auto v = c.get_int(key, fallback);
  if (v < 1) throw UsageError("key '" + key + "' must be positive");
  return static_cast<std::size_t>(v);
}

// ---------------------------------------------------------------------------
// moore: rate candidates against ensembles of coefficient trajectories

inline ScenarioResult run_moore(const Config& c) {
  const auto g = make_group(c.get("group"));
  const auto mu = make_finite_measure(g, c.get_list("atom"));
  const auto mu_d = to_double_measure(mu);
  EnsembleOptions opt;
  opt.horizon = positive_size(c, "horizon", 10000);
  opt.path_count = positive_size(c, "paths", 1000);
  opt.seed = c.get_seed();
  opt.threads = static_cast<unsigned>(c.get_int("threads", 0));
  std::vector<RateCandidate> rates;
  for (const auto& r : c.get_csv("rates", "power:0.25, power:0.5, log, geometric:0.99")) {
    rates.push_back(RateCandidate::parse(r));
  }
  for (const auto& r : rates) r.validate(opt.horizon);
  const RateThresholds thresholds{c.get_double("growth_threshold", 2.0), c.get_double("saturation_threshold", 0.95)};


  ScenarioResult out;
  out.thresholds = {{"growth", thresholds.growth},
                    {"saturation", thresholds.saturation},
                    {"checkpoints", rate_checkpoints(opt.horizon)}};
  out.results["group"] = g.name();
  out.results["measure"] = measure_json(g, mu);
  out.results["adapted"] = is_adapted(mu, g);
  out.results["strictly_aperiodic"] = is_strictly_aperiodic(mu, g);
  out.results["horizon"] = opt.horizon;
  out.results["paths"] = opt.path_count;
  json tests = json::array();
  bool all_diverging = true;

  for (const auto& rep_name : c.get_csv("rep")) {
    const auto rep = make_rep(g, rep_name);
    const CVector u = make_vector(c.get("u"), rep.dimension());
    const CVector v = make_vector(c.get("v", c.get("u")), rep.dimension());
    struct PathSummary {
      std::vector<PathMaxima> maxima;
      std::vector<double> modulus;
    };
    const auto summaries = ensemble_reduce(mu_d, rep, u, v, opt, [&](Trajectory&& t) {
      PathSummary s;
      for (const auto& r : rates) s.maxima.push_back(path_running_maxima(t.values, r));
      s.modulus.reserve(t.values.size());
      for (const auto& z : t.values) s.modulus.push_back(std::abs(z));
      return s;
    });
    std::vector<double> mean(opt.horizon, 0.0);
    for (const auto& s : summaries)
      for (std::size_t n = 0; n < opt.horizon; ++n) mean[n] += s.modulus[n];
    for (std::size_t n = 0; n < opt.horizon; ++n) {
      out.curves.push_back({rep_name + "/mc_mean_abs", n + 1, mean[n] / static_cast<double>(opt.path_count)});
    }
    const auto exact = mean_coefficient_curve(rep, mu_d, u, v, static_cast<int>(opt.horizon));
    for (std::size_t n = 0; n < exact.size(); ++n) out.curves.push_back({rep_name + "/exact_mean_abs", n + 1, exact[n]});

    for (std::size_t r = 0; r < rates.size(); ++r) {
      std::vector<PathMaxima> maxima;
      for (const auto& s : summaries) maxima.push_back(s.maxima[r]);
      const auto test = rate_test_from_maxima(std::move(maxima), opt.horizon, rates[r], thresholds);
      const std::string series = rep_name + "/" + rates[r].name();
      for (std::size_t p = 0; p < test.stats.maxima.size(); ++p)
        for (std::size_t k = 0; k < 4; ++k) {
          out.ratios.push_back({series, p, test.stats.checkpoints[k], test.stats.maxima[p][k]});
        }
      all_diverging = all_diverging && test.verdict == Verdict::kDiverging;
      tests.push_back({{"rep", rep_name},
                       {"rate", rates[r].name()},
                       {"verdict", to_string(test.verdict)},
                       {"median_growth", test.stats.median_growth},
                       {"growth_q10_q50_q90", test.stats.growth_quantiles},
                       {"saturated_fraction", test.stats.saturated_fraction},
                       {"rate_drop", test.stats.rate_drop}});
    }
  }
  out.results["rate_tests"] = tests;
  out.results["expectation"] = "diverging for every representation and rate";
  out.passed = all_diverging;
  return out;
}

// ---------------------------------------------------------------------------
// kawada-ito: exact tv(mu^n, Haar)

inline ScenarioResult run_kawada_ito(const Config& c) {
  const auto g = make_group(c.get("group"));
  const auto mu = make_finite_measure(g, c.get_list("atom"));
  const int nmax = static_cast<int>(positive_size(c, "nmax", 200));
  const double tolerance = c.get_double("tolerance", 1e-6);
  const double floor = c.get_double("limsup_floor", 0.4);
  const int by = static_cast<int>(std::min<std::int64_t>(c.get_int("converged_by", 100), nmax));
  const auto curve = kawada_ito_curve(mu, g, nmax);

  ScenarioResult out;
  out.thresholds = {{"tolerance", tolerance}, {"converged_by", by}, {"limsup_floor", floor}};
  for (int n = 1; n <= nmax; ++n) out.curves.push_back({"tv", static_cast<std::size_t>(n), curve.tv[n - 1]});
  bool monotone = true;
  for (int n = 1; n < nmax; ++n) monotone = monotone && curve.tv[n] <= curve.tv[n - 1];
  double tail = 0.0;
  for (int n = nmax / 2; n < nmax; ++n) tail = std::max(tail, curve.tv[n]);
  out.results = {{"group", g.name()},
                 {"measure", measure_json(g, mu)},
                 {"adapted", is_adapted(mu, g)},
                 {"strictly_aperiodic", is_strictly_aperiodic(mu, g)},
                 {"convergence_expected", curve.convergence_expected},
                 {"monotone", monotone},
                 {"tv_at_converged_by", curve.tv[by - 1]},
                 {"final_tv", curve.tv.back()},
                 {"tail_limsup", tail}};
  out.passed = curve.convergence_expected ? monotone && curve.tv[by - 1] < tolerance : tail >= floor;
  return out;
}

// ---------------------------------------------------------------------------
// mean-coefficient: exact mean |coefficient| against the Haar average over pi(G)

inline ScenarioResult run_mean_coefficient(const Config& c) {
  const auto g = make_group(c.get("group"));
  const auto rep = make_rep(g, c.get("rep"));
  const auto mu = make_finite_measure(g, c.get_list("atom"));
  const CVector u = make_vector(c.get("u"), rep.dimension());
  const CVector v = make_vector(c.get("v", c.get("u")), rep.dimension());
  const int nmax = static_cast<int>(positive_size(c, "nmax", 100));
  const double tolerance = c.get_double("tolerance", 1e-6);

  const auto curve = mean_coefficient_curve(rep, mu, u, v, nmax);
  const double haar = haar_average(rep, u, v);
  const bool orthogonal = orthogonal_invariant_check(rep, u, v);
  ScenarioResult out;
  out.thresholds = {{"tolerance", tolerance}};
  for (int n = 1; n <= nmax; ++n) out.curves.push_back({"mean_abs_coefficient", static_cast<std::size_t>(n), curve[n - 1]});
  const bool all_zero = std::all_of(curve.begin(), curve.end(), [](double x) { return x == 0.0; });
  out.results = {{"group", g.name()},
                 {"rep", rep.name()},
                 {"measure", measure_json(g, mu)},
                 {"orthogonal_invariant", orthogonal},
                 {"invariant_span_dimension", invariant_span(rep, u).cols()},
                 {"haar_average", haar},
                 {"final_mean", curve.back()},
                 {"abs_error", std::abs(curve.back() - haar)},
                 {"curve_identically_zero", all_zero}};
  out.passed = orthogonal ? all_zero && haar == 0.0 : haar > 0.0 && std::abs(curve.back() - haar) <= tolerance;
  return out;
}

// ---------------------------------------------------------------------------
// quotient: path-wise equality under G and G/N

inline ScenarioResult run_quotient(const Config& c) {
  const auto g = make_group(c.get("group"));
  const auto rep = make_rep(g, c.get("rep"));
  const auto mu = make_finite_measure(g, c.get_list("atom"));
  const CVector u = make_vector(c.get("u"), rep.dimension());
  const CVector v = make_vector(c.get("v", c.get("u")), rep.dimension());
  ElementSet normal;
  for (const auto& label : c.get_csv("normal")) normal.push_back(g.index_of(label));
  std::sort(normal.begin(), normal.end());
  normal.erase(std::unique(normal.begin(), normal.end()), normal.end());
  const QuotientCheckOptions opt{positive_size(c, "horizon", 1000), positive_size(c, "paths", 100), c.get_seed()};

  const bool equal = quotient_equivalence_check(rep, normal, mu, u, v, opt);
  const auto q = quotient_group(g, normal);
  ScenarioResult out;
  out.thresholds = {{"tolerance", 0}};
  const auto first = coefficient_trajectory(rep, sample_path(mu, opt.horizon, opt.seed, 0), u, v);
  for (std::size_t n = 0; n < first.values.size(); ++n) {
    out.curves.push_back({"path0_re", n + 1, first.values[n].real()});
    out.curves.push_back({"path0_im", n + 1, first.values[n].imag()});
  }
  json labels = json::array();
  for (int x : normal) labels.push_back(g.label(x));
  out.results = {{"group", g.name()},
                 {"rep", rep.name()},
                 {"normal_subgroup", labels},
                 {"quotient_order", q.group.order()},
                 {"pushforward", measure_json(q.group, pushforward(mu, q.projection))},
                 {"horizon", opt.horizon},
                 {"paths", opt.path_count},
                 {"pathwise_equal", equal}};
  out.passed = equal;
  return out;
}

// ---------------------------------------------------------------------------
// affine-folner: defects of the Folner vectors under the induced representation

inline std::string element_name(const Rational& a, const Rational& u) {
  return "(" + to_string(a) + "," + to_string(u) + ")";
}

inline ScenarioResult run_affine_folner(const Config& c) {
  const int p = static_cast<int>(c.get_int("prime", 2));
  const int depth = static_cast<int>(c.get_int("unit_depth", 3));
  const auto ns = c.get_int_csv("n", "3, 7, 15, 31");
  const double tolerance = c.get_double("tolerance", 1e-9);
  const double scale_tolerance = c.get_double("scale_tolerance", 1e-12);
  const double decay = c.get_double("decay_ratio", 0.6);
  const std::string policy_name = c.get("overflow", "strict");
  if (policy_name != "strict" && policy_name != "clamp") throw UsageError("overflow must be 'strict' or 'clamp'");
  const auto policy = policy_name == "strict" ? OverflowPolicy::kStrict : OverflowPolicy::kClampWithLeak;
  for (auto n : ns)
    if (n < 0) throw UsageError("Folner indices must be nonnegative");
  if (ns.empty()) throw UsageError("no Folner indices given");
  const auto nmax = static_cast<int>(*std::max_element(ns.begin(), ns.end()));

  const AffineGroup group(p, std::max(PAdicNumber::kDefaultPrecision, depth + 2));
  struct Item {
    Rational a, u;
    AffineElement g;
  };
  std::vector<Item> items;
  int reach = 1;
  for (const auto& t : c.get_list("translation")) {
    const Rational u = parse_rational(t);
    items.push_back({Rational(1), u, group.make(Rational(1), u)});
  }
  for (const auto& s : c.get_list("scale")) {
    const Rational a = parse_rational(s);
    if (a == 0) throw UsageError("scale must be nonzero");
    const auto el = group.make(a, Rational(0));
    reach = std::max(reach, std::abs(el.scale.valuation()));
    items.push_back({a, Rational(0), el});
  }
  if (items.empty()) throw UsageError("affine-folner needs 'translation' or 'scale' lines");
  const int margin = static_cast<int>(c.get_int("window_margin", reach));
  const InducedAffineRep rep(p, depth, -nmax - margin, margin, policy);

  ScenarioResult out;
  out.thresholds = {{"oracle_tolerance", tolerance}, {"scale_tolerance", scale_tolerance}, {"decay_ratio", decay}};
  json rows = json::array();
  json ratios = json::array();
  bool ok = true;
  for (const auto& item : items) {
    const std::string name = element_name(item.a, item.u);
    double previous = -1.0;
    std::int64_t previous_n = -1;
    for (auto n64 : ns) {
      const int n = static_cast<int>(n64);
      const auto f = rep.folner_vector(n);
      const auto moved = rep.apply(item.g, f);
      out.leaked_mass = std::max(out.leaked_mass, moved.leaked_mass());
      const double d2 = (moved - f).norm2() + moved.leaked_mass();
      double oracle = 0.0;
      double tol = tolerance;
      if (item.a == 1) {
        oracle = character_sum_oracle(p, item.g.translation[0], n);
      } else {
        const int shift = std::abs(item.g.scale.valuation());
        oracle = shift <= n ? 2.0 * shift / (n + 1) : 2.0;
        tol = scale_tolerance;
      }
      const double err = std::abs(d2 - oracle);
      ok = ok && err <= tol;
      out.curves.push_back({"defect2:" + name, static_cast<std::size_t>(n), d2});
      out.curves.push_back({"oracle:" + name, static_cast<std::size_t>(n), oracle});
      rows.push_back({{"element", name}, {"n", n}, {"defect2", d2}, {"oracle", oracle}, {"abs_error", err}});
      if (previous > 0.0) {
        const double ratio = d2 / previous;
        ok = ok && ratio <= decay;
        ratios.push_back({{"element", name}, {"from_n", previous_n}, {"to_n", n}, {"defect2_ratio", ratio}});
      }
      previous = d2;
      previous_n = n;
    }
  }
  out.results = {{"prime", p},
                 {"unit_depth", depth},
                 {"window", {-nmax - margin, margin}},
                 {"overflow", policy_name},
                 {"defects", rows},
                 {"decay", ratios},
                 {"leaked_mass", out.leaked_mass}};
  out.passed = ok;
  return out;
}

// ---------------------------------------------------------------------------
// regular-z: <R(mu^n) f, f> on Z

inline ScenarioResult run_regular_z(const Config& c) {
  const auto mu = make_z_measure(c.get_list("atom"));
  LatticeFunction f{c.get_int("f_offset", 0), {}};
  for (const auto& x : c.get_csv("f", "1")) f.values.push_back(Config::parse_text("x = " + x).get_double("x", 0.0));
  const auto check_n = c.get_int_csv("check_n", "1000, 2000");
  const double tolerance = c.get_double("ratio_tolerance", 0.05);
  std::int64_t need = 1;
  for (auto n : check_n) {
    if (n < 1) throw UsageError("check_n entries must be positive");
    need = std::max(need, 4 * n);
  }
  const int nmax = static_cast<int>(c.get_int("nmax", need));
  if (nmax < need) throw UsageError("nmax must be at least 4 * max(check_n)");

  const auto values = regular_z_decay(mu, f, nmax);
  ScenarioResult out;
  out.thresholds = {{"ratio_target", 0.5}, {"ratio_tolerance", tolerance}};
  for (int n = 1; n <= nmax; ++n) out.curves.push_back({"inner_product", static_cast<std::size_t>(n), values[n - 1]});
  bool ok = true;
  json checks = json::array();
  for (auto n : check_n) {
    const double ratio = values[4 * n - 1] / values[n - 1];
    const bool within = std::abs(ratio - 0.5) <= 0.5 * tolerance;
    ok = ok && within;
    checks.push_back({{"n", n}, {"value_n", values[n - 1]}, {"value_4n", values[4 * n - 1]}, {"ratio", ratio}, {"within", within}});
  }
  const bool positive = std::all_of(values.begin(), values.end(), [](double x) { return x > 0.0; });
  bool decreasing = true;
  for (int n = 2; n < nmax; ++n) decreasing = decreasing && values[n] < values[n - 1];
  out.results = {{"nmax", nmax},
                 {"positive", positive},
                 {"decreasing_from_2", decreasing},
                 {"ratio_checks", checks},
                 {"final_value", values.back()}};
  out.passed = ok;
  return out;
}

}  // namespace grwalk::experiment
