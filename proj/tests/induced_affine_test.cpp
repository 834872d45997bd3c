#include <gtest/gtest.h>

#include <random>

#include "grwalk/induced_affine.hpp"

namespace grwalk {
namespace {

Rational prime_power(int p, int e) {
  const BigInt m = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(std::abs(e)));
  return e >= 0 ? Rational(m) : Rational(BigInt(1), m);
}

AffineElement element(const AffineGroup& g, Rational a, Rational u) { return g.make(std::move(a), std::move(u)); }

CellVector random_cells(const InducedAffineRep& rep, int lo, int hi, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  CellVector f = rep.zero_vector();
  for (int j = lo; j <= hi; ++j)
    for (int c = 0; c < f.classes(); ++c) f.at(j, c) = {n(rng), n(rng)};
  return f;
}

// Brute force over cells b = p^j c with the p-adic character, independent of the rep's phase table.
double brute_defect_squared(int p, int depth, const Rational& u, int n) {
  const auto modulus = detail::ipow(p, depth);
  const auto uu = PAdicNumber::from_rational(p, u, 20);
  double total = 0.0;
  int classes = 0;
  for (int j = -n; j <= 0; ++j) {
    classes = 0;
    for (std::int64_t c = 1; c < modulus; ++c) {
      if (c % p == 0) continue;
      ++classes;
      const Rational b = Rational(c) * prime_power(p, j);
      const auto chi = additive_character(PAdicNumber::from_rational(p, b, 20).inverse() * uu);
      total += std::norm(chi - 1.0);
    }
  }
  return total / classes / (n + 1);
}

TEST(CellVector, ResidueIndexingRoundTrips) {
  for (int p : {2, 3, 5}) {
    const CellVector f(p, 3, 0, 0);
    int i = 0;
    for (std::int64_t c = 1; c < f.modulus(); ++c) {
      if (c % p == 0) continue;
      EXPECT_EQ(f.residue(i), c);
      EXPECT_EQ(f.class_index(c), i);
      ++i;
    }
    EXPECT_EQ(i, f.classes());
  }
}

TEST(InducedAffineApply, IdentityLeavesVectorUnchanged) {
  const InducedAffineRep rep(3, 2, -3, 3);
  const AffineGroup g(3);
  std::mt19937_64 rng(1);
  const auto f = random_cells(rep, -3, 3, rng);
  const auto out = rep.apply(g.identity(), f);
  EXPECT_EQ(out.coefficients(), f.coefficients());
}

TEST(InducedAffineApply, HalfTranslationNegatesUnitShellAtTwo) {
  const InducedAffineRep rep(2, 3, -2, 2);
  const AffineGroup g(2);
  const auto f = rep.folner_vector(0);
  const auto out = rep.apply(element(g, 1, Rational(1, 2)), f);
  for (std::size_t i = 0; i < f.coefficients().size(); ++i) {
    EXPECT_NEAR(std::abs(out.coefficients()[i] + f.coefficients()[i]), 0.0, 1e-15);
  }
}

TEST(InducedAffineApply, ScalingByPrimeShiftsShells) {
  const InducedAffineRep rep(3, 2, -4, 4);
  const AffineGroup g(3);
  std::mt19937_64 rng(2);
  const auto f = random_cells(rep, -2, 2, rng);
  const auto out = rep.apply(element(g, 3, 0), f);
  for (int j = -2; j <= 2; ++j)
    for (int c = 0; c < f.classes(); ++c) EXPECT_EQ(out.at(j + 1, c), f.at(j, c));
  EXPECT_EQ(out.shell_norm2(-2), 0.0);
}

TEST(InducedAffineApply, UnitScalingPermutesClasses) {
  const InducedAffineRep rep(5, 2, 0, 0);
  const AffineGroup g(5);
  auto f = rep.zero_vector();
  f.at(0, f.class_index(1)) = 1.0;
  // (a f)(b) = f(b / 2): the indicator of class 1 moves to class 2
  const auto out = rep.apply(element(g, 2, 0), f);
  EXPECT_EQ(out.at(0, f.class_index(2)), std::complex<double>(1.0, 0.0));
  EXPECT_EQ(out.at(0, f.class_index(1)), std::complex<double>(0.0, 0.0));
}

TEST(InducedAffineApply, StrictWindowOverflowThrows) {
  const InducedAffineRep strict(2, 2, -2, 2);
  const AffineGroup g(2);
  const auto f = strict.cell_indicator(2, 1);
  EXPECT_THROW(strict.apply(element(g, 2, 0), f), WindowOverflowError);
  EXPECT_NO_THROW(strict.apply(element(g, Rational(1, 2), 0), f));

  const InducedAffineRep clamp(2, 2, -2, 2, OverflowPolicy::kClampWithLeak);
  const auto out = clamp.apply(element(g, 2, 0), clamp.cell_indicator(2, 1));
  EXPECT_NEAR(out.leaked_mass(), 1.0, 1e-15);
  EXPECT_EQ(out.norm2(), 0.0);
}

TEST(InducedAffineApply, ShallowUnitDepthIsResolutionError) {
  const InducedAffineRep rep(3, 1, -4, 0);
  const AffineGroup g(3);
  EXPECT_THROW(rep.apply(element(g, 1, Rational(1, 9)), rep.folner_vector(3)), ResolutionError);
  EXPECT_NO_THROW(rep.apply(element(g, 1, Rational(1, 3)), rep.folner_vector(3)));
  EXPECT_THROW(InducedAffineRep(4, 1, 0, 0), UsageError);
  EXPECT_THROW(InducedAffineRep(3, 1, 1, 0), UsageError);
}

TEST(InducedAffineProperties, UnitaryAndMultiplicative) {
  std::mt19937_64 rng(3);
  for (int p : {2, 3}) {
    const InducedAffineRep rep(p, 4, -3, 3);
    const AffineGroup g(p);
    std::uniform_int_distribution<int> unit(1, 40), shift(-1, 1), num(-20, 20);
    auto random_element = [&] {
      int a = 0;
      while (a % p == 0) a = unit(rng);
      Rational scale = Rational(a) * prime_power(p, shift(rng));
      // translations with valuation >= -1
      Rational u = Rational(num(rng), p);
      return element(g, scale, u);
    };
    for (int trial = 0; trial < 40; ++trial) {
      const auto f = random_cells(rep, -1, 1, rng);
      const auto x = random_element(), y = random_element();
      const auto once = rep.apply(y, f);
      EXPECT_NEAR(once.norm(), f.norm(), 1e-10);
      const auto twice = rep.apply(x, once);
      const auto direct = rep.apply(g.mul(x, y), f);
      EXPECT_LT((twice - direct).norm(), 1e-9);
      EXPECT_EQ(twice.leaked_mass(), 0.0);
    }
  }
}

TEST(FolnerVector, Examples) {
  const InducedAffineRep rep(3, 2, -40, 2);
  for (int n : {0, 1, 3, 31}) EXPECT_NEAR(rep.folner_vector(n).norm(), 1.0, 1e-12);
  const auto f0 = rep.folner_vector(0);
  for (int c = 0; c < f0.classes(); ++c) EXPECT_EQ(f0.at(0, c), std::complex<double>(1.0, 0.0));
  EXPECT_EQ(f0.shell_norm2(-1), 0.0);
  EXPECT_EQ(folner_mass(3), 4);
  EXPECT_THROW(rep.folner_vector(41), UsageError);
  EXPECT_THROW(InducedAffineRep(3, 2, -3, -1).folner_vector(1), UsageError);
}

TEST(Defect, Examples) {
  const InducedAffineRep rep(2, 2, -8, 4);
  const AffineGroup g(2);
  EXPECT_EQ(rep.defect(g.identity(), 3), 0.0);
  for (int n : {1, 3, 7}) {
    EXPECT_NEAR(rep.defect(element(g, 2, 0), n), std::sqrt(2.0 / (n + 1)), 1e-12);
  }
  EXPECT_NEAR(rep.defect(element(g, 1, Rational(1, 2)), 3), 1.0, 1e-12);
}

TEST(CharacterSumOracle, Examples) {
  EXPECT_EQ(character_sum_oracle(2, PAdicNumber::from_integer(2, 3), 5), 0.0);
  EXPECT_NEAR(character_sum_oracle(2, PAdicNumber::from_fraction(2, 1, 2), 3), 1.0, 1e-15);
  EXPECT_NEAR(character_sum_oracle(3, PAdicNumber::from_fraction(3, 1, 3), 8), 1.0 / 3.0, 1e-15);
}

TEST(CharacterSumOracle, MatchesRootOfUnityEnumeration) {
  for (int p : {2, 3, 5}) {
    for (const Rational& u : {Rational(1), Rational(1, p), Rational(2, p * p), Rational(1, p * p * p)}) {
      for (int n : {0, 1, 2, 5}) {
        const double oracle = brute_defect_squared(p, 3, u, n);
        EXPECT_NEAR(character_sum_oracle(p, PAdicNumber::from_rational(p, u), n), oracle, 1e-12)
            << "p=" << p << " u=" << u << " n=" << n;
      }
    }
  }
}

TEST(DefectProperties, AgreesWithOracleAndDecays) {
  for (int p : {2, 3}) {
    const InducedAffineRep rep(p, 3, -35, 3);
    const AffineGroup g(p);
    for (const Rational& u : {Rational(1), Rational(1, p), Rational(1, p * p), Rational(p - 1, p * p * p)}) {
      const auto x = element(g, 1, u);
      const auto uu = PAdicNumber::from_rational(p, u);
      double previous = -1.0;
      for (int n : {3, 7, 15, 31}) {
        const double d2 = std::pow(rep.defect(x, n), 2);
        EXPECT_NEAR(d2, character_sum_oracle(p, uu, n), 1e-9);
        EXPECT_LE(d2, 4.0 * std::max(0, -uu.valuation()) / (n + 1) + 1e-12);
        if (previous > 0) {
          EXPECT_LE(d2 / previous, 0.6);
        }
        previous = d2;
      }
    }
    for (int shift : {1, 2, -1}) {
      const Rational a = prime_power(p, shift);
      for (int n : {3, 7, 15, 31}) {
        EXPECT_NEAR(std::pow(rep.defect(element(g, a, 0), n), 2), 2.0 * std::abs(shift) / (n + 1), 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace grwalk
