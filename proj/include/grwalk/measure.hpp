#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "grwalk/errors.hpp"
#include "grwalk/finite_group.hpp"
#include "grwalk/group.hpp"
#include "grwalk/rational.hpp"

namespace grwalk {

/**
 * Finitely supported probability measure.
 *
 * Atoms are kept sorted and distinct; zero-weight atoms are dropped so that
 * atoms() is exactly the support. Rational weights must sum to exactly 1,
 * double weights to within 1e-12.
 */
template <class Atom, class Weight = double>
class ProbMeasure {
 public:
  using atom_type = Atom;
  using weight_type = Weight;

  ProbMeasure(std::vector<Atom> atoms, std::vector<Weight> weights) {
    if (atoms.size() != weights.size()) throw UsageError("atom and weight counts differ");
    std::map<Atom, Weight> merged;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (weights[i] < 0) throw UsageError("negative weight in probability measure");
      if (merged.contains(atoms[i])) throw UsageError("duplicate atom in probability measure");
      merged.emplace(std::move(atoms[i]), weights[i]);
    }
    assign(merged);
    const Weight total = total_mass();
    if constexpr (std::is_floating_point_v<Weight>) {
      if (std::abs(total - 1.0) > 1e-12) throw UsageError("weights do not sum to 1");
    } else {
      if (total != 1) throw UsageError("weights do not sum to exactly 1");
    }
    if (atoms_.empty()) throw UsageError("probability measure has empty support");
  }

  static ProbMeasure point_mass(Atom atom) { return ProbMeasure({std::move(atom)}, {Weight(1)}); }

  static ProbMeasure uniform(std::vector<Atom> atoms) {
    if (atoms.empty()) throw UsageError("uniform measure on an empty set");
    const auto n = atoms.size();
    std::vector<Weight> w(n, Weight(1) / Weight(static_cast<long>(n)));
    return ProbMeasure(std::move(atoms), std::move(w));
  }

  /// Builds from accumulated weights without the mass check (results of exact operations).
  static ProbMeasure from_accumulated(const std::map<Atom, Weight>& merged) {
    ProbMeasure out;
    out.assign(merged);
    return out;
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Weight>& weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }

  Weight weight_of(const Atom& a) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
    if (it == atoms_.end() || a < *it) return Weight(0);
    return weights_[static_cast<std::size_t>(it - atoms_.begin())];
  }

  Weight total_mass() const {
    Weight total(0);
    for (const auto& w : weights_) total += w;
    return total;
  }

  friend bool operator==(const ProbMeasure&, const ProbMeasure&) = default;

 private:
  ProbMeasure() = default;

  void assign(const std::map<Atom, Weight>& merged) {
    atoms_.clear();
    weights_.clear();
    for (const auto& [atom, w] : merged) {
      if (w == 0) continue;
      atoms_.push_back(atom);
      weights_.push_back(w);
    }
  }

  std::vector<Atom> atoms_;
  std::vector<Weight> weights_;
};

/// (mu * nu)(g) = sum_x mu(x) nu(x^-1 g): the left factor is the later increment.
template <GroupFamily G, class Atom, class Weight>
ProbMeasure<Atom, Weight> convolve(const G& group, const ProbMeasure<Atom, Weight>& mu,
                                   const ProbMeasure<Atom, Weight>& nu) {
  std::map<Atom, Weight> acc;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      acc[group.mul(mu.atoms()[i], nu.atoms()[j])] += mu.weights()[i] * nu.weights()[j];
    }
  }
  return ProbMeasure<Atom, Weight>::from_accumulated(acc);
}

/// mu^n, the law of w_n ... w_1; mu^0 is the point mass at the identity.
template <GroupFamily G, class Atom, class Weight>
ProbMeasure<Atom, Weight> power(const G& group, const ProbMeasure<Atom, Weight>& mu, int n) {
  if (n < 0) throw UsageError("negative convolution power");
  auto result = ProbMeasure<Atom, Weight>::point_mass(group.identity());
  for (int i = 0; i < n; ++i) result = convolve(group, mu, result);
  return result;
}

template <class Weight = double>
ProbMeasure<int, Weight> haar_measure(const FiniteGroup& g) {
  return ProbMeasure<int, Weight>::uniform(g.all_elements());
}

template <class Weight>
bool is_adapted(const ProbMeasure<int, Weight>& mu, const FiniteGroup& g) {
  return static_cast<int>(subgroup_generated(g, mu.atoms()).size()) == g.order();
}

/**
 * supp(mu) lies in a coset sN of a proper normal subgroup iff the normal
 * closure of {s^-1 t : t in supp(mu)} is proper.
 */
template <class Weight>
bool is_strictly_aperiodic(const ProbMeasure<int, Weight>& mu, const FiniteGroup& g) {
  if (mu.size() == 0) throw UsageError("strict aperiodicity of an empty support");
  const int s_inv = g.inv(mu.atoms().front());
  std::vector<int> differences;
  for (int t : mu.atoms()) differences.push_back(g.mul(s_inv, t));
  return static_cast<int>(normal_closure(g, differences).size()) == g.order();
}

/// Support generates Z, i.e. the gcd of the atoms is 1.
template <class Weight>
bool is_adapted(const ProbMeasure<std::int64_t, Weight>& mu) {
  std::int64_t d = 0;
  for (auto a : mu.atoms()) d = std::gcd(d, a);
  return d == 1;
}

/// Support lies in no coset of mZ (m >= 2) nor in a single point.
template <class Weight>
bool is_strictly_aperiodic(const ProbMeasure<std::int64_t, Weight>& mu) {
  if (mu.size() == 0) throw UsageError("strict aperiodicity of an empty support");
  std::int64_t d = 0;
  for (auto a : mu.atoms()) d = std::gcd(d, a - mu.atoms().front());
  return d == 1;
}

/// Half the l1 distance between two finitely supported measures.
template <class Atom, class Weight>
Weight tv_distance(const ProbMeasure<Atom, Weight>& mu, const ProbMeasure<Atom, Weight>& nu) {
  Weight sum(0);
  std::size_t i = 0, j = 0;
  const auto& a = mu.atoms();
  const auto& b = nu.atoms();
  auto absdiff = [](const Weight& x, const Weight& y) { return x > y ? Weight(x - y) : Weight(y - x); };
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      sum += mu.weights()[i++];
    } else if (i == a.size() || b[j] < a[i]) {
      sum += nu.weights()[j++];
    } else {
      sum += absdiff(mu.weights()[i++], nu.weights()[j++]);
    }
  }
  return sum / 2;
}

template <class Weight>
ProbMeasure<int, Weight> pushforward(const ProbMeasure<int, Weight>& mu, const GroupHom& hom) {
  std::map<int, Weight> acc;
  for (std::size_t i = 0; i < mu.size(); ++i) acc[hom(mu.atoms()[i])] += mu.weights()[i];
  return ProbMeasure<int, Weight>::from_accumulated(acc);
}

/// Element indices of a labelled finite group, uniformly weighted.
template <class Weight = double>
ProbMeasure<int, Weight> uniform_on_labels(const FiniteGroup& g,
                                           const std::vector<std::string>& labels) {
  std::vector<int> atoms;
  for (const auto& l : labels) atoms.push_back(g.index_of(l));
  return ProbMeasure<int, Weight>::uniform(std::move(atoms));
}

}  // namespace grwalk
