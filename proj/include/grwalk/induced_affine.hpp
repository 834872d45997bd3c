#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "grwalk/errors.hpp"
#include "grwalk/group.hpp"
#include "grwalk/padic.hpp"
#include "grwalk/representation.hpp"

namespace grwalk {

enum class OverflowPolicy {
  kStrict,         ///< mass leaving the valuation window is an error
  kClampWithLeak,  ///< drop it and account for the lost squared norm
};

/**
 * Function on K* = Q_p^* that is constant on cells
 *   {b : v(b) = j, b p^-j = c mod p^d}
 * for shells j in [vmin, vmax] and units c mod p^d, and zero outside the
 * window. Haar measure gives every shell mass 1, split evenly over its
 * phi(p^d) cells.
 */
class CellVector {
 public:
  CellVector(int prime, int unit_depth, int vmin, int vmax)
      : prime_(prime), unit_depth_(unit_depth), vmin_(vmin), vmax_(vmax) {
    if (!detail::is_prime(prime)) throw UsageError("cell grid needs a prime");
    if (unit_depth < 1) throw UsageError("unit depth must be at least 1");
    if (vmin > vmax) throw UsageError("empty valuation window");
    modulus_ = detail::ipow(prime, unit_depth);
    classes_ = static_cast<int>(modulus_ - modulus_ / prime);
    coefs_.assign(static_cast<std::size_t>(shells()) * classes_, {0.0, 0.0});
  }

  int prime() const { return prime_; }
  int unit_depth() const { return unit_depth_; }
  int vmin() const { return vmin_; }
  int vmax() const { return vmax_; }
  int shells() const { return vmax_ - vmin_ + 1; }
  int classes() const { return classes_; }
  std::int64_t modulus() const { return modulus_; }
  double cell_mass() const { return 1.0 / classes_; }
  bool contains_shell(int j) const { return j >= vmin_ && j <= vmax_; }

  /// Residue mod p^d of the i-th unit class (ascending order).
  std::int64_t residue(int i) const { return i + i / (prime_ - 1) + 1; }
  /// Position of a unit residue mod p^d.
  int class_index(std::int64_t c) const { return static_cast<int>(c - c / prime_ - 1); }

  std::complex<double>& at(int shell, int cls) {
    return coefs_[static_cast<std::size_t>(shell - vmin_) * classes_ + cls];
  }
  const std::complex<double>& at(int shell, int cls) const {
    return coefs_[static_cast<std::size_t>(shell - vmin_) * classes_ + cls];
  }

  double shell_norm2(int shell) const {
    double s = 0.0;
    for (int c = 0; c < classes_; ++c) s += std::norm(at(shell, c));
    return s * cell_mass();
  }

  double norm2() const {
    double s = 0.0;
    for (const auto& z : coefs_) s += std::norm(z);
    return s * cell_mass();
  }
  double norm() const { return std::sqrt(norm2()); }

  /// Squared L2 mass dropped at window edges so far.
  double leaked_mass() const { return leaked_; }
  void add_leak(double m) { leaked_ += m; }

  bool same_grid(const CellVector& o) const {
    return prime_ == o.prime_ && unit_depth_ == o.unit_depth_ && vmin_ == o.vmin_ && vmax_ == o.vmax_;
  }

  friend CellVector operator-(const CellVector& x, const CellVector& y) {
    x.require_grid(y);
    CellVector out = x;
    for (std::size_t i = 0; i < out.coefs_.size(); ++i) out.coefs_[i] -= y.coefs_[i];
    out.leaked_ = 0.0;
    return out;
  }

  friend std::complex<double> inner(const CellVector& x, const CellVector& y) {
    x.require_grid(y);
    std::complex<double> s{0.0, 0.0};
    for (std::size_t i = 0; i < x.coefs_.size(); ++i) s += x.coefs_[i] * std::conj(y.coefs_[i]);
    return s * x.cell_mass();
  }

  const std::vector<std::complex<double>>& coefficients() const { return coefs_; }

 private:
  void require_grid(const CellVector& o) const {
    if (!same_grid(o)) throw UsageError("cell vectors live on different grids");
  }

  int prime_;
  int unit_depth_;
  int vmin_;
  int vmax_;
  std::int64_t modulus_ = 1;
  int classes_ = 1;
  std::vector<std::complex<double>> coefs_;
  double leaked_ = 0.0;
};

/**
 * The representation of K* x| K induced from the standard additive
 * character, acting on cell functions over K*:
 *   (pi(a, u) f)(b) = chi(b^-1 u) f(a^-1 b).
 */
class InducedAffineRep {
 public:
  using element_type = AffineElement;
  using vector_type = CellVector;

  InducedAffineRep(int prime, int unit_depth, int vmin, int vmax,
                   OverflowPolicy policy = OverflowPolicy::kStrict)
      : prime_(prime), unit_depth_(unit_depth), vmin_(vmin), vmax_(vmax), policy_(policy) {
    CellVector probe(prime, unit_depth, vmin, vmax);  // validates the grid
  }

  int prime() const { return prime_; }
  int unit_depth() const { return unit_depth_; }
  int vmin() const { return vmin_; }
  int vmax() const { return vmax_; }
  OverflowPolicy policy() const { return policy_; }

  CellVector zero_vector() const { return CellVector(prime_, unit_depth_, vmin_, vmax_); }

  /// Indicator of the cell (shell, unit class c) scaled to unit norm.
  CellVector cell_indicator(int shell, std::int64_t c) const {
    CellVector f = zero_vector();
    if (!f.contains_shell(shell)) throw UsageError("shell outside window");
    f.at(shell, f.class_index(c)) = std::sqrt(static_cast<double>(f.classes()));
    return f;
  }

  CellVector apply(const AffineElement& g, const CellVector& f) const {
    if (g.translation.size() != 1) throw UsageError("induced rep is implemented for K* x| K (n = 1)");
    if (!f.same_grid(zero_vector())) throw UsageError("cell vector grid does not match the rep");
    if (g.scale.prime() != prime_ || g.translation[0].prime() != prime_) {
      throw UsageError("affine element over a different prime");
    }
    if (g.scale.is_zero()) throw UsageError("affine scale must be invertible");
    if (g.scale.precision() < unit_depth_) {
      throw ResolutionError("scale known to " + std::to_string(g.scale.precision()) +
                            " digits, unit depth needs " + std::to_string(unit_depth_));
    }
    const std::int64_t modulus = f.modulus();
    const int shift = g.scale.valuation();
    const std::int64_t scale_inv = detail::invmod(g.scale.unit() % modulus, modulus);
    const PAdicNumber& u = g.translation[0];

    CellVector out = zero_vector();
    out.add_leak(f.leaked_mass());
    for (int s = vmin_; s <= vmax_; ++s) {
      const int j = s + shift;
      if (!out.contains_shell(j)) {
        const double lost = f.shell_norm2(s);
        if (lost > 0.0) {
          if (policy_ == OverflowPolicy::kStrict) {
            throw WindowOverflowError("shell " + std::to_string(s) + " maps to " + std::to_string(j) +
                                      ", outside [" + std::to_string(vmin_) + ", " +
                                      std::to_string(vmax_) + "]");
          }
          out.add_leak(lost);
        }
        continue;
      }
      const int k = u.is_zero() ? 0 : j - u.valuation();
      if (k > 0 && (k > unit_depth_ || k > u.precision())) {
        if (f.shell_norm2(s) > 0.0) {
          throw ResolutionError("character multiplier needs " + std::to_string(k) +
                                " unit digits on shell " + std::to_string(j));
        }
        continue;
      }
      const std::int64_t pk = k > 0 ? detail::ipow(prime_, k) : 1;
      for (int ci = 0; ci < out.classes(); ++ci) {
        const std::int64_t c = out.residue(ci);
        const auto& value = f.at(s, f.class_index(detail::mulmod(c, scale_inv, modulus)));
        if (value == std::complex<double>{0.0, 0.0}) continue;
        std::complex<double> phase{1.0, 0.0};
        if (k > 0) {
          const std::int64_t w = detail::mulmod(u.unit() % pk, detail::invmod(c % pk, pk), pk);
          phase = detail::root_of_unity(w, pk);
        }
        out.at(j, ci) = phase * value;
      }
    }
    return out;
  }

  /// Unit-norm indicator of B_n = {b : -n <= v(b) <= 0}.
  CellVector folner_vector(int n) const {
    if (n < 0) throw UsageError("Folner index must be nonnegative");
    if (vmin_ > -n || vmax_ < 0) {
      throw UsageError("window [" + std::to_string(vmin_) + ", " + std::to_string(vmax_) +
                       "] does not contain [-" + std::to_string(n) + ", 0]");
    }
    CellVector f = zero_vector();
    const double c = 1.0 / std::sqrt(static_cast<double>(n + 1));
    for (int j = -n; j <= 0; ++j)
      for (int ci = 0; ci < f.classes(); ++ci) f.at(j, ci) = c;
    return f;
  }

  /// ||pi(g) f_n - f_n||, counting leaked mass (f_n vanishes outside the window).
  double defect(const AffineElement& g, int n) const {
    const CellVector f = folner_vector(n);
    const CellVector moved = apply(g, f);
    return std::sqrt((moved - f).norm2() + moved.leaked_mass());
  }

 private:
  int prime_;
  int unit_depth_;
  int vmin_;
  int vmax_;
  OverflowPolicy policy_;
};

/// Haar mass of B_n under the one-mass-per-shell normalisation.
inline int folner_mass(int n) { return n + 1; }

/**
 * Closed form for ||pi(1, u) f_n - f_n||^2: shells j in [-n, 0] with
 * k = j - v(u) > 0 each contribute the mean of |zeta - 1|^2 over primitive
 * p^k-th roots of unity, 2 - 2 M(p^k)/phi(p^k), weighted by 1/(n+1).
 */
inline double character_sum_oracle(int prime, const PAdicNumber& u, int n) {
  if (n < 0) throw UsageError("Folner index must be nonnegative");
  if (u.is_zero()) return 0.0;
  double total = 0.0;
  for (int j = -n; j <= 0; ++j) {
    const int k = j - u.valuation();
    if (k <= 0) continue;
    total += k == 1 ? 2.0 + 2.0 / (prime - 1) : 2.0;
  }
  return total / (n + 1);
}

}  // namespace grwalk
