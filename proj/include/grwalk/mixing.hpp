#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "grwalk/errors.hpp"
#include "grwalk/finite_group.hpp"
#include "grwalk/measure.hpp"
#include "grwalk/representation.hpp"
#include "grwalk/walk.hpp"

namespace grwalk {

// ---------------------------------------------------------------------------
// Exact curves on finite groups

struct KawadaItoCurve {
  /// tv[n-1] = tv(mu^n, Haar), n = 1..nmax.
  std::vector<double> tv;
  /// mu is adapted and strictly aperiodic, so tv -> 0 is expected.
  bool convergence_expected = false;
};

template <class Weight>
KawadaItoCurve kawada_ito_curve(const ProbMeasure<int, Weight>& mu, const FiniteGroup& g, int nmax) {
  KawadaItoCurve curve;
  curve.convergence_expected = is_adapted(mu, g) && is_strictly_aperiodic(mu, g);
  const auto haar = haar_measure<Weight>(g);
  auto current = mu;
  for (int n = 1; n <= nmax; ++n) {
    curve.tv.push_back(to_double(tv_distance(current, haar)));
    if (n < nmax) current = convolve(g, mu, current);
  }
  return curve;
}

/// values[n-1] = sum_g mu^n(g) |<pi(g) u, v>|, exact convolution powers.
template <class Weight>
std::vector<double> mean_coefficient_curve(const FiniteDimRep& rep, const ProbMeasure<int, Weight>& mu,
                                           const CVector& u, const CVector& v, int nmax) {
  const FiniteGroup& g = rep.group();
  std::vector<double> modulus(g.order());
  for (int x = 0; x < g.order(); ++x) modulus[x] = std::abs(rep.matrix_coefficient(x, u, v));
  std::vector<double> out;
  auto current = mu;
  for (int n = 1; n <= nmax; ++n) {
    double s = 0.0;
    for (std::size_t i = 0; i < current.size(); ++i) {
      s += to_double(current.weights()[i]) * modulus[current.atoms()[i]];
    }
    out.push_back(s);
    if (n < nmax) current = convolve(g, mu, current);
  }
  return out;
}

/**
 * Average of |<t u, v>| over K = pi(G), each distinct matrix counted once.
 * Brute force over the finite image.
 */
inline double haar_average(const FiniteDimRep& rep, const CVector& u, const CVector& v) {
  std::vector<CMatrix> image;
  for (int x = 0; x < rep.group().order(); ++x) {
    const CMatrix& m = rep.matrix(x);
    const bool seen = std::any_of(image.begin(), image.end(),
                                  [&](const CMatrix& k) { return (k - m).norm() < 1e-9; });
    if (!seen) image.push_back(m);
  }
  double s = 0.0;
  for (const auto& m : image) s += std::abs(inner(CVector(m * u), v));
  return s / static_cast<double>(image.size());
}

// ---------------------------------------------------------------------------
// Walks on Z

/// Dense law of a walk on Z: weights[k - offset].
class LatticeLaw {
 public:
  explicit LatticeLaw(const ProbMeasure<std::int64_t, double>& mu) : step_(mu) {
    offset_ = 0;
    weights_ = {1.0};
  }

  /// Advances mu^n to mu^(n+1).
  void step() {
    const std::int64_t lo = step_.atoms().front(), hi = step_.atoms().back();
    std::vector<double> next(weights_.size() + static_cast<std::size_t>(hi - lo), 0.0);
    for (std::size_t a = 0; a < step_.size(); ++a) {
      const double w = step_.weights()[a];
      const auto shift = static_cast<std::size_t>(step_.atoms()[a] - lo);
      for (std::size_t i = 0; i < weights_.size(); ++i) next[i + shift] += w * weights_[i];
    }
    weights_ = std::move(next);
    offset_ += lo;
    ++n_;
  }

  int n() const { return n_; }
  std::int64_t offset() const { return offset_; }
  const std::vector<double>& weights() const { return weights_; }
  double at(std::int64_t k) const {
    if (k < offset_ || k >= offset_ + static_cast<std::int64_t>(weights_.size())) return 0.0;
    return weights_[static_cast<std::size_t>(k - offset_)];
  }

 private:
  ProbMeasure<std::int64_t, double> step_;
  std::int64_t offset_ = 0;
  std::vector<double> weights_;
  int n_ = 0;
};

/// Exact mean |coefficient| for a matrix rep of Z, via dense lattice convolution.
template <MatrixRepresentation R>
  requires std::same_as<typename R::element_type, std::int64_t>
std::vector<double> mean_coefficient_curve(const R& rep, const ProbMeasure<std::int64_t, double>& mu,
                                           const CVector& u, const CVector& v, int nmax) {
  LatticeLaw law(mu);
  std::vector<double> out;
  for (int n = 1; n <= nmax; ++n) {
    law.step();
    double s = 0.0;
    for (std::size_t i = 0; i < law.weights().size(); ++i) {
      const double w = law.weights()[i];
      if (w == 0.0) continue;
      s += w * std::abs(rep.matrix_coefficient(law.offset() + static_cast<std::int64_t>(i), u, v));
    }
    out.push_back(s);
  }
  return out;
}

/// Finitely supported real sequence on Z: f(x) = values[x - offset].
struct LatticeFunction {
  std::int64_t offset = 0;
  std::vector<double> values;
};

/**
 * <R(mu^n) f, f> for n = 1..nmax where R is the left regular rep of Z,
 * computed as sum_k mu^n(k) A(k) with A(k) = sum_x f(x - k) f(x).
 */
inline std::vector<double> regular_z_decay(const ProbMeasure<std::int64_t, double>& mu,
                                           const LatticeFunction& f, int nmax) {
  if (!is_adapted(mu)) throw UsageError("regular_z_decay: support does not generate Z");
  if (!is_strictly_aperiodic(mu)) throw UsageError("regular_z_decay: support lies in a coset of mZ");
  const auto len = static_cast<std::int64_t>(f.values.size());
  std::vector<double> autocorr(static_cast<std::size_t>(std::max<std::int64_t>(2 * len - 1, 0)), 0.0);
  for (std::int64_t k = -(len - 1); k <= len - 1; ++k) {
    double s = 0.0;
    for (std::int64_t i = 0; i < len; ++i) {
      const std::int64_t j = i - k;
      if (j >= 0 && j < len) s += f.values[j] * f.values[i];
    }
    autocorr[static_cast<std::size_t>(k + len - 1)] = s;
  }
  LatticeLaw law(mu);
  std::vector<double> out;
  for (int n = 1; n <= nmax; ++n) {
    law.step();
    double s = 0.0;
    for (std::int64_t k = -(len - 1); k <= len - 1; ++k) {
      s += law.at(k) * autocorr[static_cast<std::size_t>(k + len - 1)];
    }
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo mean coefficients

struct MeanEstimate {
  std::vector<double> mean;
  std::vector<double> std_error;
};

/// Ensemble mean of |c_n| with its standard error, paths processed in index order.
template <Representation R, class Weight>
MeanEstimate mean_coefficient_monte_carlo(const ProbMeasure<typename R::element_type, Weight>& mu,
                                          const R& rep, const typename R::vector_type& u,
                                          const typename R::vector_type& v, EnsembleOptions options) {
  const std::size_t total = options.path_count;
  std::vector<double> sum(options.horizon, 0.0), sum_sq(options.horizon, 0.0);
  constexpr std::size_t kBatch = 256;
  for (std::size_t first = 0; first < total; first += kBatch) {
    EnsembleOptions batch = options;
    batch.first_path = options.first_path + first;
    batch.path_count = std::min(kBatch, total - first);
    auto rows = ensemble_reduce(mu, rep, u, v, batch, [](Trajectory&& t) {
      std::vector<double> a(t.values.size());
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(t.values[i]);
      return a;
    });
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        sum[i] += row[i];
        sum_sq[i] += row[i] * row[i];
      }
    }
  }
  MeanEstimate est;
  const auto m = static_cast<double>(total);
  for (std::size_t i = 0; i < sum.size(); ++i) {
    const double mean = sum[i] / m;
    const double var = total > 1 ? std::max(0.0, (sum_sq[i] - m * mean * mean) / (m - 1)) : 0.0;
    est.mean.push_back(mean);
    est.std_error.push_back(std::sqrt(var / m));
  }
  return est;
}

// ---------------------------------------------------------------------------
// Rate-of-mixing candidates

/// Decreasing positive sequence a_n -> 0 tested as a mixing rate.
struct RateCandidate {
  enum class Kind { kPower, kLogarithmic, kGeometric, kTable };

  Kind kind = Kind::kPower;
  /// Exponent for kPower, ratio for kGeometric.
  double parameter = 0.5;
  /// a_1, a_2, ... for kTable.
  std::vector<double> table;

  static RateCandidate power(double exponent) {
    if (!(exponent > 0)) throw UsageError("power rate needs a positive exponent");
    return {Kind::kPower, exponent, {}};
  }
  static RateCandidate logarithmic() { return {Kind::kLogarithmic, 0.0, {}}; }
  static RateCandidate geometric(double ratio) {
    if (!(ratio > 0 && ratio < 1)) throw UsageError("geometric rate needs a ratio in (0, 1)");
    return {Kind::kGeometric, ratio, {}};
  }
  static RateCandidate custom(std::vector<double> values) { return {Kind::kTable, 0.0, std::move(values)}; }

  /// Parses "power:<alpha>", "log", "geometric:<rho>".
  static RateCandidate parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    auto arg = [&] {
      if (colon == std::string::npos) throw UsageError("rate '" + text + "' needs a parameter");
      try {
        return std::stod(text.substr(colon + 1));
      } catch (const std::exception&) {
        throw UsageError("bad rate parameter in '" + text + "'");
      }
    };
    if (head == "power") return power(arg());
    if (head == "geometric") return geometric(arg());
    if (head == "log" && colon == std::string::npos) return logarithmic();
    throw UsageError("unknown rate candidate '" + text + "'");
  }

  double operator()(std::size_t n) const {
    const auto x = static_cast<double>(n);
    switch (kind) {
      case Kind::kPower: return std::pow(x, -parameter);
      case Kind::kLogarithmic: return 1.0 / std::log(x + 2.0);
      case Kind::kGeometric: return std::pow(parameter, x);
      case Kind::kTable:
        if (n < 1 || n > table.size()) throw UsageError("rate table too short");
        return table[n - 1];
    }
    return 0.0;
  }

  std::string name() const {
    auto num = [](double x) {
      std::string s = std::to_string(x);
      s.erase(s.find_last_not_of('0') + 1);
      if (!s.empty() && s.back() == '.') s.pop_back();
      return s;
    };
    switch (kind) {
      case Kind::kPower: return "power:" + num(parameter);
      case Kind::kLogarithmic: return "log";
      case Kind::kGeometric: return "geometric:" + num(parameter);
      case Kind::kTable: return "table";
    }
    return "";
  }

  /// a_n positive and non-increasing on 1..horizon with a_horizon < a_1.
  void validate(std::size_t horizon) const {
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= horizon; ++n) {
      const double a = (*this)(n);
      if (!(a > 0.0)) throw UsageError("rate " + name() + " is not positive at n=" + std::to_string(n));
      if (a > previous) throw UsageError("rate " + name() + " increases at n=" + std::to_string(n));
      previous = a;
    }
    if (horizon > 1 && !((*this)(horizon) < (*this)(1))) {
      throw UsageError("rate " + name() + " does not decrease over the horizon");
    }
  }
};

/// n^-1/4, n^-1/2, 1/log(n+2), 0.99^n.
inline std::vector<RateCandidate> default_rate_battery() {
  return {RateCandidate::power(0.25), RateCandidate::power(0.5), RateCandidate::logarithmic(),
          RateCandidate::geometric(0.99)};
}

enum class Verdict { kDiverging, kConsistentWithRate, kInconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kDiverging: return "diverging";
    case Verdict::kConsistentWithRate: return "consistent-with-rate";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "";
}

struct RateThresholds {
  /// Median M(N)/M(N/4) at or above this is "diverging".
  double growth = 2.0;
  /// Fraction of paths with M(N) == M(N/4) needed for "consistent-with-rate".
  double saturation = 0.95;
};

/// Checkpoints N/8, N/4, N/2, N.
inline std::array<std::size_t, 4> rate_checkpoints(std::size_t horizon) {
  if (horizon < 8) throw UsageError("rate test needs a horizon of at least 8");
  return {horizon / 8, horizon / 4, horizon / 2, horizon};
}

using PathMaxima = std::array<double, 4>;

/// Running maxima of |c_n| / a_n at the four checkpoints.
inline PathMaxima path_running_maxima(std::span<const std::complex<double>> values,
                                      const RateCandidate& rate) {
  const auto cps = rate_checkpoints(values.size());
  PathMaxima out{};
  double running = 0.0;
  std::size_t next = 0;
  for (std::size_t n = 1; n <= values.size(); ++n) {
    running = std::max(running, std::abs(values[n - 1]) / rate(n));
    while (next < cps.size() && cps[next] == n) out[next++] = running;
  }
  return out;
}

struct RatioStats {
  std::array<std::size_t, 4> checkpoints{};
  std::vector<PathMaxima> maxima;
  /// M(N) / M(N/4) per path; 1 when both vanish.
  std::vector<double> growth;
  double median_growth = 0.0;
  /// 10%, 50%, 90% quantiles of growth.
  std::array<double, 3> growth_quantiles{};
  /// Fraction of paths with M(N) == M(N/4).
  double saturated_fraction = 0.0;
  /// a(N/4) / a(N).
  double rate_drop = 0.0;
};

struct RateTestResult {
  RateCandidate candidate;
  RateThresholds thresholds;
  RatioStats stats;
  Verdict verdict = Verdict::kInconclusive;
};

namespace detail {

/// Linear-interpolated quantile of a sample (q in [0, 1]).
inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

}  // namespace detail

inline RateTestResult rate_test_from_maxima(std::vector<PathMaxima> maxima, std::size_t horizon,
                                            const RateCandidate& rate, const RateThresholds& thresholds = {}) {
  if (maxima.empty()) throw UsageError("rate test needs at least one path");
  rate.validate(horizon);
  RateTestResult result{rate, thresholds, {}, Verdict::kInconclusive};
  RatioStats& st = result.stats;
  st.checkpoints = rate_checkpoints(horizon);
  st.rate_drop = rate(st.checkpoints[1]) / rate(horizon);
  std::size_t saturated = 0;
  for (const auto& m : maxima) {
    const double quarter = m[1], full = m[3];
    double g = 1.0;
    if (quarter > 0.0) {
      g = full / quarter;
    } else if (full > 0.0) {
      g = std::numeric_limits<double>::infinity();
    }
    st.growth.push_back(g);
    if (full == quarter) ++saturated;
  }
  st.maxima = std::move(maxima);
  st.median_growth = detail::quantile(st.growth, 0.5);
  st.growth_quantiles = {detail::quantile(st.growth, 0.1), st.median_growth, detail::quantile(st.growth, 0.9)};
  st.saturated_fraction = static_cast<double>(saturated) / static_cast<double>(st.growth.size());
  if (st.median_growth >= thresholds.growth) {
    result.verdict = Verdict::kDiverging;
  } else if (st.saturated_fraction >= thresholds.saturation) {
    result.verdict = Verdict::kConsistentWithRate;
  }
  return result;
}

/**
 * "diverging" when the median of M(N)/M(N/4) reaches thresholds.growth,
 * "consistent-with-rate" when M(N) == M(N/4) on at least
 * thresholds.saturation of the paths, otherwise "inconclusive".
 */
inline RateTestResult rate_test(std::span<const Trajectory> trajectories, const RateCandidate& rate,
                                const RateThresholds& thresholds = {}) {
  if (trajectories.empty()) throw UsageError("rate test needs at least one trajectory");
  const std::size_t horizon = trajectories.front().values.size();
  rate.validate(horizon);
  std::vector<PathMaxima> maxima;
  for (const auto& t : trajectories) {
    if (t.values.size() != horizon) throw UsageError("trajectories have different horizons");
    maxima.push_back(path_running_maxima(t.values, rate));
  }
  return rate_test_from_maxima(std::move(maxima), horizon, rate, thresholds);
}

// ---------------------------------------------------------------------------
// Quotient equivalence

struct QuotientCheckOptions {
  std::size_t horizon = 1000;
  std::size_t path_count = 100;
  std::uint64_t seed = 0;
};

/**
 * Runs each sampled path under (G, mu, pi) and, with its increments pushed
 * to G/N, under (G/N, mu~, pi~); true iff every coefficient agrees exactly.
 */
template <class Weight>
bool quotient_equivalence_check(const FiniteDimRep& rep, std::span<const int> normal,
                                const ProbMeasure<int, Weight>& mu, const CVector& u, const CVector& v,
                                const QuotientCheckOptions& options) {
  const FiniteGroup& g = rep.group();
  if (!is_normal_subgroup(g, normal)) throw UsageError("quotient check: subgroup is not normal");
  if (!is_trivial_on(rep, normal)) throw UsageError("quotient check: subgroup is not in ker(pi)");
  const Quotient q = quotient_group(g, normal);
  const FiniteDimRep factor = factor_rep(rep, q, normal);
  const auto projected_mu = pushforward(mu, q.projection);
  const AtomSampler<int, Weight> sampler(mu);
  for (std::size_t i = 0; i < options.path_count; ++i) {
    const auto path = sample_path(sampler, options.horizon, options.seed, i);
    WalkPath<int> image{path.seed, path.path_index, {}};
    for (int w : path.increments) {
      const int wq = q.projection(w);
      if (projected_mu.weight_of(wq) == 0) throw InternalError("projected increment outside the pushforward support");
      image.increments.push_back(wq);
    }
    const auto upstairs = coefficient_trajectory(rep, path, u, v);
    const auto downstairs = coefficient_trajectory(factor, image, u, v);
    if (upstairs.values != downstairs.values) return false;
  }
  return true;
}

}  // namespace grwalk
