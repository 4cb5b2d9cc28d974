// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "srm/coded_real.hpp"

using srm::CodedReal;
using srm::ExponentSchedule;
using srm::IntervalSet;
using srm::Rational;

namespace {

Rational q(const char* s) { return srm::parse_rational(s); }

}  // namespace

TEST(Rational, RoundTripsThroughText) {
  EXPECT_EQ(srm::to_string(q("6/4")), "3/2");
  EXPECT_EQ(srm::to_string(q("5")), "5/1");
  EXPECT_EQ(srm::to_string(q("-0/7")), "0/1");
  EXPECT_THROW(q("1/0"), std::domain_error);
  EXPECT_THROW(q("1.5"), std::invalid_argument);
  EXPECT_THROW(q(""), std::invalid_argument);
}

TEST(Gamma, FrozenValues) {
  EXPECT_EQ(srm::gamma(ExponentSchedule{0}, 0), q("1/2"));
  EXPECT_EQ(srm::gamma(ExponentSchedule{0}, 3), q("1/256"));
  EXPECT_EQ(srm::gamma(ExponentSchedule{2}, 0), q("1/8"));
}

TEST(IntervalSet, NormalizesToUniqueForm) {
  const IntervalSet a{{q("1"), q("2")}, {q("2"), q("3")}, {q("1/2"), q("3/2")}};
  const IntervalSet b{{q("1/2"), q("3")}};
  EXPECT_EQ(a, b);
  EXPECT_TRUE(IntervalSet::half_open(q("2"), q("1")).empty());
  EXPECT_EQ(IntervalSet::half_open(q("-1"), q("1")), IntervalSet::half_open(q("0"), q("1")));
}

TEST(IntervalSet, SetAlgebra) {
  const IntervalSet a{{q("0"), q("2")}};
  const IntervalSet b{{q("1"), q("3")}};
  EXPECT_EQ(a.intersect(b), IntervalSet::half_open(q("1"), q("2")));
  EXPECT_EQ(a.subtract(b), IntervalSet::half_open(q("0"), q("1")));
  EXPECT_EQ(a.unite(b), IntervalSet::half_open(q("0"), q("3")));
  EXPECT_TRUE(a.contains(q("0")));
  EXPECT_FALSE(a.contains(q("2")));
  EXPECT_TRUE(b.contains(q("5/2")));
}

TEST(CodedReal, NormalFormMergesAndDropsZeros) {
  const auto s = ExponentSchedule{0};
  const IntervalSet b{{q("1"), q("2")}};
  const CodedReal x = CodedReal::basis(s, b) + CodedReal::basis(s, b);
  ASSERT_EQ(x.terms().size(), 1u);
  EXPECT_EQ(x.terms()[0].coeff, Rational(2));
  const CodedReal z = CodedReal(1) + Rational(0) * CodedReal::basis(s, b);
  EXPECT_TRUE(z.is_rational());
  EXPECT_EQ((x - x).terms().size(), 0u);
}

TEST(Eval, EmptySetIsZero) {
  const CodedReal x = CodedReal::basis(ExponentSchedule{0}, IntervalSet{});
  for (unsigned long n = 0; n < 6; ++n) {
    const auto e = srm::eval(x, n);
    EXPECT_EQ(e.lo, 0);
    EXPECT_EQ(e.hi, 0);
  }
}

TEST(Eval, FrozenEnclosures) {
  const CodedReal x = CodedReal::basis(ExponentSchedule{0}, IntervalSet::half_open(0, 1));
  const auto e0 = srm::eval(x, 0);
  EXPECT_EQ(e0.lo, q("1/2"));
  EXPECT_EQ(e0.hi, q("1"));
  // Indices 0 and 2 land in [0,1): 1/2 + 1/16, tail 2 * 2^-8.
  const auto e2 = srm::eval(x, 2);
  EXPECT_EQ(e2.lo, q("9/16"));
  EXPECT_EQ(e2.hi, q("73/128"));
  const auto r = srm::eval(CodedReal(1), 5);
  EXPECT_EQ(r.lo, 1);
  EXPECT_EQ(r.hi, 1);
}

TEST(Eval, TailBoundDominatesFiniteExtension) {
  // Σ_{N<i<=M} 2^{-F_k(i)} <= 2^{1-F_k(N+1)} for every finite extension M.
  for (unsigned long k = 0; k < 3; ++k)
    for (unsigned long n = 0; n < 8; ++n) {
      Rational sum = 0;
      for (unsigned long i = n + 1; i <= 12; ++i) sum += srm::gamma(ExponentSchedule{k}, i);
      EXPECT_LE(sum, 2 * srm::gamma(ExponentSchedule{k}, n + 1));
    }
}

TEST(Eval, EnclosuresNestAndContainPartialSums) {
  const auto s = ExponentSchedule{1};
  const CodedReal x = Rational(3) * CodedReal::basis(s, IntervalSet{{q("0"), q("3/2")}}) -
                      CodedReal::basis(s, IntervalSet{{q("1/3"), q("5/2")}}) + CodedReal(q("1/7"));
  auto prev = srm::eval(x, 0);
  for (unsigned long n = 1; n < 12; ++n) {
    const auto cur = srm::eval(x, n);
    EXPECT_TRUE(cur.within(prev)) << n;
    EXPECT_LE(cur.width(), prev.width());
    prev = cur;
  }
}
