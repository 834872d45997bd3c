#include <gtest/gtest.h>

#include <random>

#include "grwalk/measure.hpp"

namespace grwalk {
namespace {

using ExactMeasure = ProbMeasure<int, Rational>;
using ZMeasure = ProbMeasure<std::int64_t, Rational>;

ExactMeasure labels(const FiniteGroup& g, const std::vector<std::string>& names) {
  return uniform_on_labels<Rational>(g, names);
}

// Independent oracle: enumerate every ordered pair of atoms.
std::map<int, Rational> brute_convolve(const FiniteGroup& g, const ExactMeasure& mu, const ExactMeasure& nu) {
  std::map<int, Rational> out;
  for (int x = 0; x < g.order(); ++x)
    for (int y = 0; y < g.order(); ++y) out[g.mul(x, y)] += mu.weight_of(x) * nu.weight_of(y);
  return out;
}

ExactMeasure random_measure(const FiniteGroup& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, g.order() - 1), weight(1, 5);
  std::map<int, Rational> raw;
  const int k = 1 + pick(rng) % 4;
  for (int i = 0; i < k; ++i) raw[pick(rng)] += weight(rng);
  Rational total = 0;
  for (auto& [a, w] : raw) total += w;
  std::vector<int> atoms;
  std::vector<Rational> weights;
  for (auto& [a, w] : raw) {
    atoms.push_back(a);
    weights.push_back(w / total);
  }
  return ExactMeasure(atoms, weights);
}

TEST(ProbMeasure, RejectsBadWeights) {
  EXPECT_THROW(ExactMeasure({0, 1}, {Rational(1, 2), Rational(1, 3)}), UsageError);
  EXPECT_THROW(ExactMeasure({0, 0}, {Rational(1, 2), Rational(1, 2)}), UsageError);
  EXPECT_THROW(ExactMeasure({0, 1}, {Rational(3, 2), Rational(-1, 2)}), UsageError);
  EXPECT_THROW((ProbMeasure<int>({0, 1}, {0.5, 0.5 + 1e-9})), UsageError);
  EXPECT_NO_THROW((ProbMeasure<int>({0, 1}, {0.5, 0.5 + 1e-14})));
}

TEST(Convolve, PointMasses) {
  const auto s3 = symmetric_group(3);
  const int g = s3.index_of("(12)"), h = s3.index_of("(123)");
  const auto prod = convolve(s3, ExactMeasure::point_mass(g), ExactMeasure::point_mass(h));
  EXPECT_EQ(prod, ExactMeasure::point_mass(s3.mul(g, h)));
}

TEST(Convolve, S3SquareAtIdentity) {
  const auto s3 = symmetric_group(3);
  const auto mu = labels(s3, {"e", "(12)", "(23)"});
  EXPECT_EQ(convolve(s3, mu, mu).weight_of(s3.identity()), Rational(1, 3));
}

TEST(Convolve, IntegerLatticeSquare) {
  const IntegerLattice z;
  const auto mu = ZMeasure::uniform({-1, 1});
  const auto sq = convolve(z, mu, mu);
  EXPECT_EQ(sq.weight_of(0), Rational(1, 2));
  EXPECT_EQ(sq.weight_of(2), Rational(1, 4));
  EXPECT_EQ(sq.weight_of(1), Rational(0));
}

TEST(Convolve, NewIncrementOnTheLeft) {
  const auto s3 = symmetric_group(3);
  const int a = s3.index_of("(12)"), b = s3.index_of("(23)");
  // law of w2 w1 with w1 = (12), w2 = (23)
  const auto law = convolve(s3, ExactMeasure::point_mass(b), ExactMeasure::point_mass(a));
  EXPECT_EQ(law.atoms(), std::vector<int>{s3.index_of("(132)")});
}

TEST(ConvolveProperties, MatchesBruteForceAndIsAssociative) {
  std::mt19937_64 rng(5);
  for (const auto& g : {symmetric_group(3), dihedral_group(4), quaternion_group(), cyclic_group(5)}) {
    for (int trial = 0; trial < 25; ++trial) {
      const auto a = random_measure(g, rng), b = random_measure(g, rng), c = random_measure(g, rng);
      const auto ab = convolve(g, a, b);
      for (const auto& [x, w] : brute_convolve(g, a, b)) EXPECT_EQ(ab.weight_of(x), w);
      EXPECT_EQ(ab.total_mass(), Rational(1));
      EXPECT_EQ(convolve(g, ab, c), convolve(g, a, convolve(g, b, c)));
    }
  }
}

TEST(Power, ZeroAndOne) {
  const auto s3 = symmetric_group(3);
  const auto mu = labels(s3, {"(12)", "(23)"});
  EXPECT_EQ(power(s3, mu, 0), ExactMeasure::point_mass(s3.identity()));
  EXPECT_EQ(power(s3, mu, 1), mu);
  EXPECT_THROW(power(s3, mu, -1), UsageError);
}

TEST(Adapted, Examples) {
  const auto s3 = symmetric_group(3);
  EXPECT_TRUE(is_adapted(haar_measure<Rational>(s3), s3));
  EXPECT_TRUE(is_adapted(labels(s3, {"(12)", "(23)"}), s3));
  EXPECT_FALSE(is_adapted(labels(s3, {"(123)"}), s3));
}

TEST(StrictlyAperiodic, Examples) {
  const auto s3 = symmetric_group(3);
  EXPECT_TRUE(is_strictly_aperiodic(haar_measure<Rational>(s3), s3));
  EXPECT_FALSE(is_strictly_aperiodic(labels(s3, {"(12)", "(23)"}), s3));
  EXPECT_TRUE(is_strictly_aperiodic(labels(s3, {"e", "(12)", "(23)"}), s3));
  EXPECT_FALSE(is_strictly_aperiodic(ExactMeasure::point_mass(s3.index_of("(12)")), s3));
}

TEST(StrictlyAperiodic, AgreesWithCosetEnumeration) {
  // oracle: supp(mu) lies in sN for some proper normal N
  for (const auto& g : {symmetric_group(3), dihedral_group(4), quaternion_group(), cyclic_group(6)}) {
    std::vector<ElementSet> normals;
    for (int x = 0; x < g.order(); ++x)
      for (int y = 0; y < g.order(); ++y) {
        const auto n = normal_closure(g, ElementSet{x, y});
        if (static_cast<int>(n.size()) < g.order()) normals.push_back(n);
      }
    normals.push_back(ElementSet{g.identity()});
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 60; ++trial) {
      const auto mu = random_measure(g, rng);
      bool in_coset = false;
      for (const auto& n : normals) {
        const int s = mu.atoms().front();
        bool all = true;
        for (int t : mu.atoms()) {
          all = all && std::binary_search(n.begin(), n.end(), g.mul(g.inv(s), t));
        }
        in_coset = in_coset || all;
      }
      EXPECT_EQ(is_strictly_aperiodic(mu, g), !in_coset) << g.name();
    }
  }
}

TEST(IntegerLatticeVerdicts, GcdRules) {
  EXPECT_TRUE(is_adapted(ZMeasure::uniform({-1, 0, 1})));
  EXPECT_TRUE(is_strictly_aperiodic(ZMeasure::uniform({-1, 0, 1})));
  EXPECT_TRUE(is_adapted(ZMeasure::uniform({-1, 1})));
  EXPECT_FALSE(is_strictly_aperiodic(ZMeasure::uniform({-1, 1})));
  EXPECT_FALSE(is_adapted(ZMeasure::uniform({2, 4})));
  EXPECT_TRUE(is_strictly_aperiodic(ZMeasure::uniform({2, 3})));
}

TEST(TotalVariation, Examples) {
  const auto s3 = symmetric_group(3);
  const auto haar = haar_measure<Rational>(s3);
  const auto mu = labels(s3, {"e", "(12)", "(23)"});
  EXPECT_EQ(tv_distance(mu, mu), Rational(0));
  EXPECT_EQ(tv_distance(ExactMeasure::point_mass(s3.identity()), haar), Rational(5, 6));
  EXPECT_EQ(tv_distance(mu, haar), Rational(1, 2));
}

TEST(TotalVariation, ContractsTowardHaar) {
  std::mt19937_64 rng(17);
  for (const auto& g : {symmetric_group(3), dihedral_group(4), quaternion_group()}) {
    const auto haar = haar_measure<Rational>(g);
    for (int trial = 0; trial < 10; ++trial) {
      const auto mu = random_measure(g, rng);
      auto current = mu;
      Rational previous = tv_distance(current, haar);
      for (int n = 2; n <= 12; ++n) {
        current = convolve(g, mu, current);
        const Rational tv = tv_distance(current, haar);
        EXPECT_LE(tv, previous);
        previous = tv;
      }
    }
  }
}

TEST(Pushforward, Examples) {
  const auto s3 = symmetric_group(3);
  const auto mu = labels(s3, {"e", "(12)", "(23)"});
  EXPECT_EQ(pushforward(mu, identity_hom(s3)), mu);

  const auto q = quotient_group(s3, labels(s3, {"e", "(123)", "(132)"}).atoms());
  const auto image = pushforward(mu, q.projection);
  const int even = q.projection(s3.identity());
  const int odd = q.projection(s3.index_of("(12)"));
  EXPECT_EQ(image.weight_of(even), Rational(1, 3));
  EXPECT_EQ(image.weight_of(odd), Rational(2, 3));

  const auto trivial = quotient_group(s3, s3.all_elements());
  EXPECT_EQ(pushforward(mu, trivial.projection).size(), 1u);
}

}  // namespace
}  // namespace grwalk
