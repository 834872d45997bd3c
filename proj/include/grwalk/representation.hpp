#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "grwalk/errors.hpp"
#include "grwalk/finite_group.hpp"

namespace grwalk {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// <x, y>, linear in x and conjugate-linear in y.
inline std::complex<double> inner(const CVector& x, const CVector& y) { return y.dot(x); }

template <class R>
concept Representation = requires(const R& rep, const typename R::element_type& g,
                                  const typename R::vector_type& x) {
  { rep.apply(g, x) } -> std::convertible_to<typename R::vector_type>;
  { inner(x, x) } -> std::convertible_to<std::complex<double>>;
};

/// Finite-dimensional representation the group acts through by matrices.
template <class R>
concept MatrixRepresentation = Representation<R> && requires(const R& rep, const typename R::element_type& g) {
  { rep.matrix(g) } -> std::convertible_to<CMatrix>;
  { rep.dimension() } -> std::convertible_to<int>;
  rep.generators();
};

namespace detail {

/// e^(2 pi i num/den), exact at multiples of a quarter turn.
inline std::complex<double> root_of_unity(std::int64_t num, std::int64_t den) {
  num = ((num % den) + den) % den;
  if ((4 * num) % den == 0) {
    static constexpr std::complex<double> kQuarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return kQuarter[(4 * num) / den];
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den));
}

inline void require_dimension(const CVector& x, int d) {
  if (x.size() != d) {
    throw UsageError("vector of dimension " + std::to_string(x.size()) +
                     " used with a representation of dimension " + std::to_string(d));
  }
}

}  // namespace detail

/**
 * Unitary representation of a finite group, one matrix per element.
 * Construction verifies unitarity and the homomorphism law to 1e-10.
 */
class FiniteDimRep {
 public:
  using element_type = int;
  using vector_type = CVector;

  FiniteDimRep(std::string name, FiniteGroup group, std::vector<CMatrix> matrices)
      : name_(std::move(name)), group_(std::move(group)), matrices_(std::move(matrices)) {
    if (static_cast<int>(matrices_.size()) != group_.order()) {
      throw UsageError(name_ + ": need one matrix per group element");
    }
    dim_ = static_cast<int>(matrices_.front().rows());
    for (const auto& m : matrices_) {
      if (m.rows() != dim_ || m.cols() != dim_) throw UsageError(name_ + ": matrix shape mismatch");
      if ((m.adjoint() * m - CMatrix::Identity(dim_, dim_)).norm() > 1e-10) {
        throw UsageError(name_ + ": matrix is not unitary");
      }
    }
    for (int a = 0; a < group_.order(); ++a)
      for (int b = 0; b < group_.order(); ++b)
        if ((matrices_[group_.mul(a, b)] - matrices_[a] * matrices_[b]).norm() > 1e-10) {
          throw UsageError(name_ + ": matrices do not form a homomorphism");
        }
  }

  const std::string& name() const { return name_; }
  const FiniteGroup& group() const { return group_; }
  int dimension() const { return dim_; }
  const CMatrix& matrix(int g) const { return matrices_.at(g); }
  std::vector<int> generators() const { return group_.all_elements(); }

  CVector apply(int g, const CVector& x) const {
    detail::require_dimension(x, dim_);
    return matrices_.at(g) * x;
  }

  std::complex<double> matrix_coefficient(int g, const CVector& u, const CVector& v) const {
    detail::require_dimension(u, dim_);
    detail::require_dimension(v, dim_);
    return inner(apply(g, u), v);
  }

 private:
  std::string name_;
  FiniteGroup group_;
  std::vector<CMatrix> matrices_;
  int dim_ = 0;
};

/// Rotation by k*angle acting on C^2, a representation of Z with compact closure.
class RotationRep {
 public:
  using element_type = std::int64_t;
  using vector_type = CVector;

  explicit RotationRep(double angle) : angle_(angle) {}

  double angle() const { return angle_; }
  int dimension() const { return 2; }
  std::vector<std::int64_t> generators() const { return {1, -1}; }

  CMatrix matrix(std::int64_t k) const {
    const double t = static_cast<double>(k) * angle_;
    CMatrix m(2, 2);
    m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return m;
  }

  CVector apply(std::int64_t k, const CVector& x) const {
    detail::require_dimension(x, 2);
    return matrix(k) * x;
  }

  std::complex<double> matrix_coefficient(std::int64_t k, const CVector& u, const CVector& v) const {
    return inner(apply(k, u), v);
  }

 private:
  double angle_;
};

inline FiniteDimRep trivial_rep(const FiniteGroup& g, int dim = 1) {
  return FiniteDimRep("trivial", g, std::vector<CMatrix>(g.order(), CMatrix::Identity(dim, dim)));
}

/// Standard (n-1)-dimensional rep of S_n on the sum-zero hyperplane, Helmert basis.
inline FiniteDimRep standard_rep(const FiniteGroup& g) {
  const auto& perms = g.permutations();
  if (perms.empty()) throw UsageError("standard_rep needs a symmetric group");
  const int n = static_cast<int>(perms.front().size());
  if (n < 2) throw UsageError("standard_rep needs n >= 2");
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, n - 1);
  for (int k = 1; k < n; ++k) {
    const double s = 1.0 / std::sqrt(static_cast<double>(k * (k + 1)));
    for (int i = 0; i < k; ++i) basis(i, k - 1) = s;
    basis(k, k - 1) = -k * s;
  }
  std::vector<CMatrix> mats;
  for (const auto& perm : perms) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (int x = 0; x < n; ++x) p(perm[x], x) = 1.0;
    mats.push_back((basis.transpose() * p * basis).cast<std::complex<double>>());
  }
  return FiniteDimRep("standard", g, std::move(mats));
}

inline FiniteDimRep sign_character(const FiniteGroup& g) {
  const auto& perms = g.permutations();
  if (perms.empty()) throw UsageError("sign_character needs a symmetric group");
  std::vector<CMatrix> mats;
  for (const auto& perm : perms) {
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
    mats.push_back(CMatrix::Constant(1, 1, inversions % 2 ? -1.0 : 1.0));
  }
  return FiniteDimRep("sign", g, std::move(mats));
}

/// Character r^k -> e^(2 pi i j k / m) of a cyclic group built by cyclic_group(m).
inline FiniteDimRep cyclic_character(const FiniteGroup& g, int j) {
  const int m = g.order();
  std::vector<CMatrix> mats;
  for (int k = 0; k < m; ++k) {
    mats.push_back(CMatrix::Constant(1, 1, detail::root_of_unity(static_cast<std::int64_t>(j) * k, m)));
  }
  return FiniteDimRep("character:" + std::to_string(j), g, std::move(mats));
}

/// Faithful 2-dim rep of Q8 (indices as in quaternion_group()).
inline FiniteDimRep quaternion_rep(const FiniteGroup& g) {
  if (g.order() != 8 || g.name() != "Q8") throw UsageError("quaternion_rep needs Q8");
  using C = std::complex<double>;
  const C i{0, 1};
  CMatrix one = CMatrix::Identity(2, 2);
  CMatrix qi(2, 2), qj(2, 2), qk(2, 2);
  qi << i, 0, 0, -i;
  qj << 0, 1, -1, 0;
  qk << 0, i, i, 0;
  return FiniteDimRep("quaternion", g, {one, -one, qi, -qi, qj, -qj, qk, -qk});
}

/// Block-diagonal rep a (+) b.
inline FiniteDimRep direct_sum(const FiniteDimRep& a, const FiniteDimRep& b) {
  if (!(a.group() == b.group())) throw UsageError("direct_sum of reps of different groups");
  const int da = a.dimension(), db = b.dimension();
  std::vector<CMatrix> mats;
  for (int g = 0; g < a.group().order(); ++g) {
    CMatrix m = CMatrix::Zero(da + db, da + db);
    m.topLeftCorner(da, da) = a.matrix(g);
    m.bottomRightCorner(db, db) = b.matrix(g);
    mats.push_back(std::move(m));
  }
  return FiniteDimRep(a.name() + "+" + b.name(), a.group(), std::move(mats));
}

inline bool is_trivial_on(const FiniteDimRep& rep, std::span<const int> subset, double tol = 1e-12) {
  const CMatrix id = CMatrix::Identity(rep.dimension(), rep.dimension());
  for (int x : subset)
    if ((rep.matrix(x) - id).norm() > tol) return false;
  return true;
}

/// Rep of G/N given by the coset representatives' matrices; N must lie in the kernel.
inline FiniteDimRep factor_rep(const FiniteDimRep& rep, const Quotient& q, std::span<const int> normal) {
  if (!is_trivial_on(rep, normal)) throw UsageError("factor_rep: subgroup is not in the kernel");
  std::vector<CMatrix> mats;
  for (int r : q.representatives) mats.push_back(rep.matrix(r));
  return FiniteDimRep(rep.name() + "/N", q.group, std::move(mats));
}

/// Unit basis vector e_i of C^d.
inline CVector basis_vector(int d, int i) {
  CVector e = CVector::Zero(d);
  e(i) = 1.0;
  return e;
}

/**
 * Orthonormal basis (as columns) of the smallest rep-invariant subspace
 * containing u. Images under the generators are added until the rank,
 * taken at 1e-10 relative to the largest singular value, stops growing.
 */
template <MatrixRepresentation R>
CMatrix invariant_span(const R& rep, const CVector& u, double tol = 1e-10) {
  const int d = rep.dimension();
  detail::require_dimension(u, d);
  if (u.norm() == 0.0) return CMatrix(d, 0);
  auto orthonormalize = [&](const CMatrix& cols) {
    Eigen::JacobiSVD<CMatrix> svd(cols, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    int rank = 0;
    while (rank < s.size() && s(rank) > tol * s(0)) ++rank;
    return CMatrix(svd.matrixU().leftCols(rank));
  };
  CMatrix basis = orthonormalize(u);
  const auto gens = rep.generators();
  for (int round = 0; round <= d; ++round) {
    CMatrix candidates(d, basis.cols() * (1 + static_cast<Eigen::Index>(gens.size())));
    Eigen::Index c = 0;
    for (Eigen::Index k = 0; k < basis.cols(); ++k) {
      candidates.col(c++) = basis.col(k);
      for (const auto& g : gens) candidates.col(c++) = rep.apply(g, basis.col(k));
    }
    CMatrix next = orthonormalize(candidates);
    if (next.cols() > d) throw InternalError("invariant span exceeded the ambient dimension");
    if (next.cols() == basis.cols()) return next;
    basis = std::move(next);
  }
  throw InternalError("invariant span did not stabilise");
}

/// v is orthogonal to the invariant subspace generated by u (to 1e-9).
template <MatrixRepresentation R>
bool orthogonal_invariant_check(const R& rep, const CVector& u, const CVector& v) {
  detail::require_dimension(v, rep.dimension());
  const CMatrix basis = invariant_span(rep, u);
  if (basis.cols() == 0) return true;
  return (basis.adjoint() * v).norm() <= 1e-9 * std::max(1.0, v.norm());
}

}  // namespace grwalk
