#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "grwalk/errors.hpp"
#include "grwalk/finite_group.hpp"
#include "grwalk/padic.hpp"

namespace grwalk {

template <class G>
concept GroupFamily = requires(const G& group, const typename G::element_type& x) {
  { group.mul(x, x) } -> std::convertible_to<typename G::element_type>;
  { group.inv(x) } -> std::convertible_to<typename G::element_type>;
  { group.identity() } -> std::convertible_to<typename G::element_type>;
};

/// The additive group Z with exact 64-bit elements.
struct IntegerLattice {
  using element_type = std::int64_t;
  std::int64_t mul(std::int64_t a, std::int64_t b) const { return a + b; }
  std::int64_t inv(std::int64_t a) const { return -a; }
  std::int64_t identity() const { return 0; }
};

/// Element (a, u) of K* x| K^n: acts on K^n by x -> a x + u.
struct AffineElement {
  PAdicNumber scale;
  std::vector<PAdicNumber> translation;

  friend bool operator==(const AffineElement&, const AffineElement&) = default;
  friend bool operator<(const AffineElement& x, const AffineElement& y) {
    if (x.scale < y.scale) return true;
    if (y.scale < x.scale) return false;
    return x.translation < y.translation;
  }
};

/**
 * Affine group K* x| K^n over Q_p with (a,u)(b,v) = (ab, u + a v) and
 * (a,u)^-1 = (a^-1, -a^-1 u).
 */
class AffineGroup {
 public:
  using element_type = AffineElement;

  explicit AffineGroup(int prime, int precision = PAdicNumber::kDefaultPrecision, int dim = 1)
      : prime_(prime), precision_(precision), dim_(dim) {
    if (dim < 1) throw UsageError("affine group dimension must be at least 1");
    PAdicNumber probe(prime, precision);  // validates prime and precision
  }

  int prime() const { return prime_; }
  int precision() const { return precision_; }
  int dimension() const { return dim_; }

  AffineElement identity() const {
    return {PAdicNumber::from_integer(prime_, 1, precision_),
            std::vector<PAdicNumber>(dim_, PAdicNumber(prime_, precision_))};
  }

  /// Element from rational scale and translation entries.
  AffineElement make(const Rational& scale, const std::vector<Rational>& translation) const {
    if (scale == 0) throw UsageError("affine scale must be nonzero");
    if (static_cast<int>(translation.size()) != dim_) {
      throw UsageError("translation has wrong dimension");
    }
    AffineElement g{PAdicNumber::from_rational(prime_, scale, precision_), {}};
    for (const auto& t : translation) {
      g.translation.push_back(PAdicNumber::from_rational(prime_, t, precision_));
    }
    return g;
  }

  AffineElement make(const Rational& scale, const Rational& translation) const {
    return make(scale, std::vector<Rational>{translation});
  }

  AffineElement mul(const AffineElement& x, const AffineElement& y) const {
    check(x);
    check(y);
    AffineElement out{x.scale * y.scale, {}};
    out.translation.reserve(dim_);
    for (int i = 0; i < dim_; ++i) {
      out.translation.push_back(x.translation[i] + x.scale * y.translation[i]);
    }
    return out;
  }

  AffineElement inv(const AffineElement& x) const {
    check(x);
    AffineElement out{x.scale.inverse(), {}};
    for (const auto& t : x.translation) out.translation.push_back(-(out.scale * t));
    return out;
  }

 private:
  void check(const AffineElement& x) const {
    if (static_cast<int>(x.translation.size()) != dim_ || x.scale.prime() != prime_) {
      throw UsageError("affine element does not belong to this group");
    }
    if (x.scale.is_zero()) throw UsageError("affine scale must be invertible");
    for (const auto& t : x.translation) {
      if (t.prime() != prime_) throw UsageError("affine element does not belong to this group");
    }
  }

  int prime_;
  int precision_;
  int dim_;
};

/// Index into a specific finite group.
struct FiniteElement {
  const FiniteGroup* group;
  int index;
};

/// Family-tagged element for code that mixes group families at runtime.
using GroupElement = std::variant<FiniteElement, std::int64_t, AffineElement>;

inline GroupElement group_mul(const GroupElement& g, const GroupElement& h) {
  if (g.index() != h.index()) throw UsageError("group_mul: elements from different group families");
  if (const auto* a = std::get_if<FiniteElement>(&g)) {
    const auto& b = std::get<FiniteElement>(h);
    if (a->group != b.group && !(*a->group == *b.group)) {
      throw UsageError("group_mul: elements of different finite groups");
    }
    return FiniteElement{a->group, a->group->mul(a->index, b.index)};
  }
  if (const auto* a = std::get_if<std::int64_t>(&g)) {
    return IntegerLattice{}.mul(*a, std::get<std::int64_t>(h));
  }
  const auto& x = std::get<AffineElement>(g);
  const auto& y = std::get<AffineElement>(h);
  if (x.scale.prime() != y.scale.prime() || x.translation.size() != y.translation.size()) {
    throw UsageError("group_mul: affine elements over different fields or dimensions");
  }
  const AffineGroup family(x.scale.prime(), x.scale.precision(),
                           static_cast<int>(x.translation.size()));
  return family.mul(x, y);
}

inline GroupElement group_inv(const GroupElement& g) {
  if (const auto* a = std::get_if<FiniteElement>(&g)) {
    return FiniteElement{a->group, a->group->inv(a->index)};
  }
  if (const auto* a = std::get_if<std::int64_t>(&g)) return -*a;
  const auto& x = std::get<AffineElement>(g);
  const AffineGroup family(x.scale.prime(), x.scale.precision(),
                           static_cast<int>(x.translation.size()));
  return family.inv(x);
}

}  // namespace grwalk
