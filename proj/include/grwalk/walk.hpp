#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <type_traits>
#include <vector>

#include "grwalk/errors.hpp"
#include "grwalk/group.hpp"
#include "grwalk/measure.hpp"
#include "grwalk/rational.hpp"
#include "grwalk/representation.hpp"

namespace grwalk {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Counter-based uniform in [0, 1) keyed by (seed, path, step).
inline double keyed_uniform(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
  std::uint64_t h = detail::splitmix64(seed);
  h = detail::splitmix64(h ^ detail::splitmix64(path + 0x632be59bd9b4e019ULL));
  h = detail::splitmix64(h ^ detail::splitmix64(step + 0x8cb92ba72f3d8dd7ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Inverse-CDF sampler over the atoms of a measure.
template <class Atom, class Weight>
class AtomSampler {
 public:
  explicit AtomSampler(const ProbMeasure<Atom, Weight>& mu) : atoms_(mu.atoms()) {
    double acc = 0.0;
    for (const auto& w : mu.weights()) {
      acc += to_double(w);
      cumulative_.push_back(acc);
    }
  }

  const Atom& operator()(double uniform) const {
    const double target = uniform * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                         atoms_.size() - 1);
    return atoms_[i];
  }

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

template <class Atom>
struct WalkPath {
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  std::vector<Atom> increments;
};

template <class Atom, class Weight>
WalkPath<Atom> sample_path(const AtomSampler<Atom, Weight>& sampler, std::size_t horizon,
                           std::uint64_t seed, std::uint64_t path_index) {
  if (horizon < 1) throw UsageError("walk horizon must be at least 1");
  WalkPath<Atom> path{seed, path_index, {}};
  path.increments.reserve(horizon);
  for (std::size_t n = 0; n < horizon; ++n) {
    path.increments.push_back(sampler(keyed_uniform(seed, path_index, n)));
  }
  return path;
}

/// i.i.d. increments w_1..w_N from mu; a pure function of (mu, N, seed, path_index).
template <class Atom, class Weight>
WalkPath<Atom> sample_path(const ProbMeasure<Atom, Weight>& mu, std::size_t horizon,
                           std::uint64_t seed, std::uint64_t path_index) {
  return sample_path(AtomSampler<Atom, Weight>(mu), horizon, seed, path_index);
}

/// g_1 = w_1, g_n = w_n g_(n-1).
template <GroupFamily G>
std::vector<typename G::element_type> random_products(const G& group,
                                                      const WalkPath<typename G::element_type>& path) {
  std::vector<typename G::element_type> out;
  out.reserve(path.increments.size());
  for (const auto& w : path.increments) {
    out.push_back(out.empty() ? w : group.mul(w, out.back()));
  }
  return out;
}

/// c_n = <pi(g_n) u, v> for n = 1..N.
struct Trajectory {
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  std::vector<std::complex<double>> values;
  /// Squared norm lost to window clamping (induced rep only).
  double leaked_mass = 0.0;
};

namespace detail {

template <class V>
double leak_of(const V& x) {
  if constexpr (requires { x.leaked_mass(); }) {
    return x.leaked_mass();
  } else {
    return 0.0;
  }
}

}  // namespace detail

/**
 * Streams x_n = pi(w_n) x_(n-1) from x_0 = u and records <x_n, v>, so the
 * products g_n are never formed.
 */
template <Representation R>
Trajectory coefficient_trajectory(const R& rep, const WalkPath<typename R::element_type>& path,
                                  const typename R::vector_type& u,
                                  const typename R::vector_type& v) {
  Trajectory t{path.seed, path.path_index, {}, 0.0};
  t.values.reserve(path.increments.size());
  typename R::vector_type x = u;
  for (const auto& w : path.increments) {
    x = rep.apply(w, x);
    t.values.push_back(inner(x, v));
  }
  t.leaked_mass = detail::leak_of(x);
  return t;
}

struct EnsembleOptions {
  std::size_t horizon = 10000;
  std::size_t path_count = 1000;
  std::uint64_t seed = 0;
  /// Index of the first path; paths first_path .. first_path + path_count - 1 are run.
  std::uint64_t first_path = 0;
  /// 0 picks hardware concurrency.
  unsigned threads = 0;
};

/**
 * Runs path_count independent paths and maps each trajectory through
 * reduce. Results are indexed by path, so they do not depend on the
 * thread count.
 */
template <Representation R, class Weight, class Reduce>
auto ensemble_reduce(const ProbMeasure<typename R::element_type, Weight>& mu, const R& rep,
                     const typename R::vector_type& u, const typename R::vector_type& v,
                     const EnsembleOptions& options, Reduce reduce) {
  using Result = std::invoke_result_t<Reduce, Trajectory&&>;
  if (options.path_count < 1) throw UsageError("ensemble needs at least one path");
  const AtomSampler<typename R::element_type, Weight> sampler(mu);
  std::vector<Result> results(options.path_count);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto path = sample_path(sampler, options.horizon, options.seed, options.first_path + i);
      results[i] = reduce(coefficient_trajectory(rep, path, u, v));
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, options.path_count));
  if (threads <= 1) {
    work(0, options.path_count);
    return results;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  const std::size_t chunk = (options.path_count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(options.path_count, begin + chunk);
    pool.emplace_back([&, t, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

template <Representation R, class Weight>
std::vector<Trajectory> ensemble_run(const ProbMeasure<typename R::element_type, Weight>& mu,
                                     const R& rep, const typename R::vector_type& u,
                                     const typename R::vector_type& v, const EnsembleOptions& options) {
  return ensemble_reduce(mu, rep, u, v, options, [](Trajectory&& t) { return std::move(t); });
}

}  // namespace grwalk
