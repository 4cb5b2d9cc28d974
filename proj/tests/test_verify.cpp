// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "generators.hpp"
#include "srm/verify.hpp"

namespace srm {
namespace {

FiniteMetric triangle(Rational a, Rational b, Rational c) {
  return FiniteMetric::from_rationals({"a", "b", "c"}, {{0, a, b}, {a, 0, c}, {b, c, 0}});
}

TEST(IsMetric, Examples) {
  EXPECT_TRUE(is_metric(triangle(1, 1, 1)).passed());
  EXPECT_TRUE(is_strict_triangle(triangle(1, 1, 1)).passed());
  EXPECT_TRUE(is_metric(triangle(1, 3, 2)).passed());
  const Report strict = is_strict_triangle(triangle(1, 3, 2));
  EXPECT_EQ(strict.verdict, Verdict::fail);
  ASSERT_EQ(strict.witnesses.size(), 1u);
  EXPECT_EQ(strict.witnesses[0].size(), 3u);
  const Report broken = is_metric(triangle(1, 4, 2));
  EXPECT_EQ(broken.verdict, Verdict::fail);
  EXPECT_FALSE(broken.witnesses.empty());
  EXPECT_EQ(is_metric(triangle(0, 1, 1)).verdict, Verdict::fail);
}

TEST(IsMetric, CodedEntriesAreDecided) {
  const ExponentSchedule k{0};
  const CodedReal a = CodedReal::basis(k, IntervalSet{{Rational(0), Rational(1, 2)}});
  const CodedReal b = CodedReal::basis(k, IntervalSet{{Rational(0), Rational(2, 3)}});
  const FiniteMetric d({"x", "y", "z"}, {{0, a, b}, {a, 0, b}, {b, b, 0}});
  EXPECT_TRUE(is_metric(d).passed());
  const FiniteMetric far({"x", "y", "z"}, {{0, a, CodedReal(5)}, {a, 0, b}, {CodedReal(5), b, 0}});
  EXPECT_EQ(is_metric(far).verdict, Verdict::fail);
}

TEST(SupDistance, Examples) {
  const auto d = triangle(1, 2, 2);
  const Enclosure same = sup_distance(d, d);
  EXPECT_EQ(same.lo, 0);
  EXPECT_EQ(same.hi, 0);
  const auto two = FiniteMetric::from_rationals({"a", "b"}, {{0, 1}, {1, 0}});
  const auto two2 = FiniteMetric::from_rationals({"a", "b"}, {{0, Rational(5, 4)}, {Rational(5, 4), 0}});
  EXPECT_EQ(sup_distance(two, two2).lo, Rational(1, 4));
  EXPECT_EQ(sup_distance(two, two2).hi, Rational(1, 4));
  EXPECT_THROW(sup_distance(two, d), std::domain_error);
  EXPECT_TRUE(sup_distance_at_most(two, two2, CodedReal(Rational(1, 4))).passed());
  EXPECT_EQ(sup_distance_at_most(two, two2, CodedReal(Rational(1, 5))).verdict, Verdict::fail);
}

TEST(StrongRigidity, Examples) {
  const Report eq = is_strongly_rigid(triangle(1, 1, 1));
  EXPECT_EQ(eq.verdict, Verdict::fail);
  ASSERT_EQ(eq.witnesses.size(), 1u);
  EXPECT_EQ(eq.witnesses[0].size(), 4u);
  EXPECT_TRUE(is_strongly_rigid(triangle(1, Rational(11, 10), Rational(6, 5))).passed());
}

TEST(Isometries, Examples) {
  EXPECT_EQ(isometry_group(triangle(1, 1, 1)).size(), 6u);
  EXPECT_FALSE(is_rigid(triangle(1, 1, 1)).passed());
  const auto group = isometry_group(triangle(2, 3, 4));
  ASSERT_EQ(group.size(), 1u);
  EXPECT_EQ(group[0], (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_TRUE(is_rigid(triangle(2, 3, 4)).passed());
  // Square with equal diagonals: dihedral group of order 8.
  const auto sq = FiniteMetric::from_rationals(
      {"a", "b", "c", "d"}, {{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}});
  EXPECT_EQ(isometry_group(sq).size(), 8u);
  std::vector<std::vector<Rational>> big(13, std::vector<Rational>(13, Rational(1)));
  for (std::size_t i = 0; i < 13; ++i) big[i][i] = 0;
  std::vector<std::string> labels;
  for (int i = 0; i < 13; ++i) labels.push_back("p" + std::to_string(i));
  EXPECT_THROW(isometry_group(FiniteMetric::from_rationals(labels, big)), resource_error);
}

TEST(Lnm, Examples) {
  const Report eq = lnm_membership(triangle(1, 1, 1), 0);
  EXPECT_EQ(eq.verdict, Verdict::fail);
  EXPECT_EQ(eq.witnesses[0], (std::vector<std::string>{"a", "b", "a", "c"}));
  for (unsigned long m = 0; m < 6; ++m)
    EXPECT_TRUE(lnm_membership(triangle(2, 3, 4), m).passed());
  // Only d(a,b) = d(c,d) = 1/8 repeats.
  const auto d = FiniteMetric::from_rationals(
      {"a", "b", "c", "d"},
      {{0, Rational(1, 8), Rational(1, 4), Rational(5, 16)},
       {Rational(1, 8), 0, Rational(3, 8), Rational(7, 16)},
       {Rational(1, 4), Rational(3, 8), 0, Rational(1, 8)},
       {Rational(5, 16), Rational(7, 16), Rational(1, 8), 0}});
  ASSERT_EQ(is_strongly_rigid(d).verdict, Verdict::fail);
  EXPECT_TRUE(lnm_membership(d, 2).passed());
  EXPECT_EQ(lnm_membership(d, 3).verdict, Verdict::fail);
  EXPECT_EQ(strongly_rigid_by_lnm(d).verdict, Verdict::fail);
}

TEST(Embedding, Examples) {
  EXPECT_TRUE(distance_embedding_check(triangle(2, 3, 4), "a").passed());
  const Report eq = distance_embedding_check(triangle(1, 1, 1), "c");
  EXPECT_EQ(eq.verdict, Verdict::fail);
  EXPECT_EQ(eq.witnesses[0], (std::vector<std::string>{"a", "b", "c"}));
  const auto two = FiniteMetric::from_rationals({"a", "b"}, {{0, 7}, {7, 0}});
  EXPECT_TRUE(distance_embedding_check(two, "a").passed());
  EXPECT_THROW(distance_embedding_check(two, "z"), std::domain_error);
}

TEST(Oracles, ConsistentOnRandomMatrices) {
  testing::Rng rng(3);
  int rigid = 0;
  for (int t = 0; t < 120; ++t) {
    const auto n = static_cast<std::size_t>(testing::uniform(rng, 2, 7));
    const FiniteMetric d = testing::random_rational_metric(rng, n, 8, t % 2 ? 16 : 3);
    const bool sr = is_strongly_rigid(d).passed();
    EXPECT_EQ(sr, strongly_rigid_by_lnm(d).passed());
    if (sr) {
      ++rigid;
      if (n >= 3) {
        EXPECT_TRUE(is_rigid(d).passed());
      }
      for (const std::string& xi : d.points()) EXPECT_TRUE(distance_embedding_check(d, xi).passed());
    }
  }
  EXPECT_GT(rigid, 10);
}

}  // namespace
}  // namespace srm
