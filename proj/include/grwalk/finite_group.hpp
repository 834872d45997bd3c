#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "grwalk/errors.hpp"

namespace grwalk {

/// Sorted, duplicate-free list of element indices.
using ElementSet = std::vector<int>;

/**
 * Finite group given by its Cayley table.
 *
 * Elements are the indices 0..order-1 and mul(a, b) = table[a][b]. The
 * constructor checks the group axioms: exhaustively for order <= 24 and on
 * a fixed pseudo-random sample of triples above that.
 */
class FiniteGroup {
 public:
  using element_type = int;

  FiniteGroup(std::string name, std::vector<std::vector<int>> table,
              std::vector<std::string> labels = {})
      : name_(std::move(name)), table_(std::move(table)), labels_(std::move(labels)) {
    const int n = order();
    if (n < 1) throw UsageError("group must have at least one element");
    for (const auto& row : table_) {
      if (static_cast<int>(row.size()) != n) throw UsageError("Cayley table is not square");
      for (int x : row) {
        if (x < 0 || x >= n) throw UsageError("Cayley table entry out of range");
      }
    }
    if (labels_.empty()) {
      for (int i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
    }
    if (static_cast<int>(labels_.size()) != n) throw UsageError("label count differs from order");
    find_identity_and_inverses();
    check_associativity();
  }

  const std::string& name() const { return name_; }
  int order() const { return static_cast<int>(table_.size()); }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inverse_[a]; }
  const std::string& label(int a) const { return labels_.at(a); }
  const std::vector<std::vector<int>>& table() const { return table_; }

  int index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw UsageError("no element labelled '" + label + "' in " + name_);
    return static_cast<int>(it - labels_.begin());
  }

  ElementSet all_elements() const {
    ElementSet all(order());
    std::iota(all.begin(), all.end(), 0);
    return all;
  }

  /// Permutation images of each element, when the group was built as S_n.
  const std::vector<std::vector<int>>& permutations() const { return permutations_; }
  void set_permutations(std::vector<std::vector<int>> perms) { permutations_ = std::move(perms); }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.table_ == b.table_;
  }

 private:
  void find_identity_and_inverses() {
    const int n = order();
    identity_ = -1;
    for (int e = 0; e < n && identity_ < 0; ++e) {
      bool ok = true;
      for (int a = 0; a < n && ok; ++a) ok = table_[e][a] == a && table_[a][e] == a;
      if (ok) identity_ = e;
    }
    if (identity_ < 0) throw UsageError(name_ + ": Cayley table has no identity");
    inverse_.assign(n, -1);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (table_[a][b] == identity_ && table_[b][a] == identity_) {
          inverse_[a] = b;
          break;
        }
      }
      if (inverse_[a] < 0) throw UsageError(name_ + ": element " + labels_[a] + " has no inverse");
    }
  }

  void check_associativity() const {
    const int n = order();
    auto fails = [&](int a, int b, int c) {
      return table_[table_[a][b]][c] != table_[a][table_[b][c]];
    };
    if (n <= 24) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            if (fails(a, b, c)) throw UsageError(name_ + ": Cayley table is not associative");
      return;
    }
    std::mt19937_64 rng(0x5eedu);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int t = 0; t < 20000; ++t) {
      if (fails(pick(rng), pick(rng), pick(rng))) {
        throw UsageError(name_ + ": Cayley table is not associative");
      }
    }
  }

  std::string name_;
  std::vector<std::vector<int>> table_;
  std::vector<std::string> labels_;
  std::vector<int> inverse_;
  std::vector<std::vector<int>> permutations_;
  int identity_ = 0;
};

/// Exhaustive check of closure, identity, inverses and associativity.
inline bool satisfies_group_axioms(const FiniteGroup& g) {
  const int n = g.order();
  for (int a = 0; a < n; ++a) {
    if (g.mul(g.identity(), a) != a || g.mul(a, g.identity()) != a) return false;
    if (g.mul(a, g.inv(a)) != g.identity() || g.mul(g.inv(a), a) != g.identity()) return false;
    for (int b = 0; b < n; ++b) {
      const int ab = g.mul(a, b);
      if (ab < 0 || ab >= n) return false;
      for (int c = 0; c < n; ++c) {
        if (g.mul(ab, c) != g.mul(a, g.mul(b, c))) return false;
      }
    }
  }
  return true;
}

/// Reads "order" then order rows of 0-based product indices.
inline FiniteGroup parse_cayley_table(std::istream& in, std::string name = "table") {
  int n = 0;
  if (!(in >> n) || n < 1) throw UsageError("Cayley table: expected a positive order");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (auto& row : table) {
    for (auto& x : row) {
      if (!(in >> x)) throw UsageError("Cayley table: too few entries");
    }
  }
  std::string extra;
  if (in >> extra) throw UsageError("Cayley table: trailing data '" + extra + "'");
  return FiniteGroup(std::move(name), std::move(table));
}

inline FiniteGroup cyclic_group(int m) {
  if (m < 1) throw UsageError("cyclic group order must be positive");
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  std::vector<std::string> labels;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) table[a][b] = (a + b) % m;
    labels.push_back(a == 0 ? "e" : a == 1 ? "r" : "r^" + std::to_string(a));
  }
  return FiniteGroup("C" + std::to_string(m), std::move(table), std::move(labels));
}

/// Dihedral group of order 2m; element r^k s^f has index k + m*f.
inline FiniteGroup dihedral_group(int m) {
  if (m < 2) throw UsageError("dihedral group needs m >= 2");
  const int n = 2 * m;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  std::vector<std::string> labels(n);
  for (int x = 0; x < n; ++x) {
    const int a = x % m, f = x / m;
    const std::string rot = a == 0 ? "" : a == 1 ? "r" : "r^" + std::to_string(a);
    labels[x] = f == 0 ? (a == 0 ? "e" : rot) : rot + "s";
    for (int y = 0; y < n; ++y) {
      const int b = y % m, g = y / m;
      const int k = ((f == 0 ? a + b : a - b) % m + m) % m;
      table[x][y] = k + m * ((f + g) % 2);
    }
  }
  return FiniteGroup("D" + std::to_string(m), std::move(table), std::move(labels));
}

namespace detail {

inline std::string cycle_label(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<bool> seen(n, false);
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (seen[i] || perm[i] == i) continue;
    out += '(';
    for (int j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      out += std::to_string(j + 1);
    }
    out += ')';
  }
  return out.empty() ? "e" : out;
}

}  // namespace detail

/**
 * Symmetric group S_n (n <= 6) with product (s*t)(x) = s(t(x)), so the
 * right factor acts first. Labels use cycle notation on 1..n.
 */
inline FiniteGroup symmetric_group(int n) {
  if (n < 1 || n > 6) throw UsageError("symmetric_group supports 1 <= n <= 6");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < static_cast<int>(perms.size()); ++i) index[perms[i]] = i;
  const int order = static_cast<int>(perms.size());
  std::vector<std::vector<int>> table(order, std::vector<int>(order));
  std::vector<std::string> labels;
  for (int a = 0; a < order; ++a) {
    labels.push_back(detail::cycle_label(perms[a]));
    for (int b = 0; b < order; ++b) {
      std::vector<int> prod(n);
      for (int x = 0; x < n; ++x) prod[x] = perms[a][perms[b][x]];
      table[a][b] = index.at(prod);
    }
  }
  FiniteGroup g("S" + std::to_string(n), std::move(table), std::move(labels));
  g.set_permutations(std::move(perms));
  return g;
}

/// Quaternion group Q8; indices 0..7 are 1, -1, i, -i, j, -j, k, -k.
inline FiniteGroup quaternion_group() {
  // unit u in {1,i,j,k} = {0,1,2,3}; product table of units with signs
  static constexpr int kUnit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static constexpr int kSign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  std::vector<std::vector<int>> table(8, std::vector<int>(8));
  for (int x = 0; x < 8; ++x) {
    for (int y = 0; y < 8; ++y) {
      const int ux = x / 2, uy = y / 2;
      const int sign = (x % 2 ? -1 : 1) * (y % 2 ? -1 : 1) * kSign[ux][uy];
      table[x][y] = 2 * kUnit[ux][uy] + (sign < 0 ? 1 : 0);
    }
  }
  return FiniteGroup("Q8", std::move(table), {"1", "-1", "i", "-i", "j", "-j", "k", "-k"});
}

/// Least subgroup containing s, by closure under multiplication.
inline ElementSet subgroup_generated(const FiniteGroup& g, std::span<const int> s) {
  std::vector<bool> in(g.order(), false);
  ElementSet members{g.identity()};
  in[g.identity()] = true;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (int gen : s) {
      const int x = g.mul(gen, members[i]);
      if (!in[x]) {
        in[x] = true;
        members.push_back(x);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

/// Least normal subgroup containing s: generated by all conjugates of s.
inline ElementSet normal_closure(const FiniteGroup& g, std::span<const int> s) {
  std::vector<bool> seen(g.order(), false);
  std::vector<int> conjugates;
  for (int x : s) {
    for (int h = 0; h < g.order(); ++h) {
      const int c = g.mul(g.mul(h, x), g.inv(h));
      if (!seen[c]) {
        seen[c] = true;
        conjugates.push_back(c);
      }
    }
  }
  return subgroup_generated(g, conjugates);
}

inline bool is_subgroup(const FiniteGroup& g, std::span<const int> h) {
  if (h.empty()) return false;
  std::vector<bool> in(g.order(), false);
  for (int x : h) in[x] = true;
  for (int a : h)
    for (int b : h)
      if (!in[g.mul(a, g.inv(b))]) return false;
  return true;
}

inline bool is_normal_subgroup(const FiniteGroup& g, std::span<const int> n) {
  if (!is_subgroup(g, n)) return false;
  std::vector<bool> in(g.order(), false);
  for (int x : n) in[x] = true;
  for (int h = 0; h < g.order(); ++h)
    for (int x : n)
      if (!in[g.mul(g.mul(h, x), g.inv(h))]) return false;
  return true;
}

/// Map between finite groups, stored as an index table.
struct GroupHom {
  std::string source;
  std::string target;
  std::vector<int> map;

  int operator()(int g) const { return map.at(g); }
};

inline bool is_homomorphism(const FiniteGroup& source, const FiniteGroup& target,
                            const GroupHom& hom) {
  if (static_cast<int>(hom.map.size()) != source.order()) return false;
  for (int a = 0; a < source.order(); ++a)
    for (int b = 0; b < source.order(); ++b)
      if (hom(source.mul(a, b)) != target.mul(hom(a), hom(b))) return false;
  return true;
}

inline GroupHom identity_hom(const FiniteGroup& g) {
  return {g.name(), g.name(), g.all_elements()};
}

/// Quotient G/N together with the canonical projection.
struct Quotient {
  FiniteGroup group;
  GroupHom projection;
  /// Smallest-index element of each coset.
  std::vector<int> representatives;
};

inline Quotient quotient_group(const FiniteGroup& g, std::span<const int> normal) {
  if (!is_normal_subgroup(g, normal)) {
    throw UsageError("quotient_group: subset is not a normal subgroup of " + g.name());
  }
  std::vector<int> coset(g.order(), -1);
  std::vector<int> reps;
  for (int x = 0; x < g.order(); ++x) {
    if (coset[x] >= 0) continue;
    const int id = static_cast<int>(reps.size());
    reps.push_back(x);
    for (int y : normal) coset[g.mul(x, y)] = id;
  }
  const int q = static_cast<int>(reps.size());
  std::vector<std::vector<int>> table(q, std::vector<int>(q));
  std::vector<std::string> labels;
  for (int a = 0; a < q; ++a) {
    labels.push_back(g.label(reps[a]) + "N");
    for (int b = 0; b < q; ++b) table[a][b] = coset[g.mul(reps[a], reps[b])];
  }
  FiniteGroup quotient(g.name() + "/N", std::move(table), std::move(labels));
  GroupHom projection{g.name(), quotient.name(), coset};
  if (!is_homomorphism(g, quotient, projection)) {
    throw InternalError("coset projection failed the homomorphism check");
  }
  return {std::move(quotient), std::move(projection), std::move(reps)};
}

}  // namespace grwalk
