#include <gtest/gtest.h>

#include "twopoint/projective.hpp"

using namespace twopoint;

namespace {

Degree deg(long d) { return Degree::scalar(Rat(d)); }

ZSeries<Rat> mono(Rat c, int e) { return ZSeries<Rat>::monomial(c, e); }

}  // namespace

TEST(PnColumn, P1Examples) {
  auto c00 = pn_column(1, 0, 0, 5);
  EXPECT_EQ(c00[0], ZSeries<Rat>::constant(Rat(1)));
  EXPECT_TRUE(c00[1].is_zero());

  auto c01 = pn_column(1, 0, 1, 5);
  EXPECT_EQ(c01[0], mono(Rat(1), -2));
  EXPECT_EQ(c01[1], mono(Rat(-2), -3));

  auto c11 = pn_column(1, 1, 1, 5);
  EXPECT_EQ(c11[0], mono(Rat(1), -1));
  EXPECT_EQ(c11[1], mono(Rat(-1), -2));

  EXPECT_THROW(pn_column(1, 2, 1, 5), ValidationError);
}

TEST(PnColumn, DerivativeShift) {
  // column j+1 = (P + d z) column j
  for (int n = 1; n <= 3; ++n) {
    for (long d = 0; d <= 3; ++d) {
      for (int j = 0; j < n; ++j) {
        auto cj = pn_column(n, j, d, 12);
        auto next = pn_column(n, j + 1, d, 12);
        for (int p = 0; p <= n; ++p) {
          ZSeries<Rat> expect = cj[p].shifted(1) * Rat(d);
          if (p > 0) expect += cj[p - 1];
          EXPECT_EQ(next[p], expect) << "n=" << n << " d=" << d << " j=" << j << " p=" << p;
        }
      }
    }
  }
}

TEST(PnTarget, BasisData) {
  TargetSpec t = make_projective_target(3);
  EXPECT_EQ(t.size(), 4u);
  EXPECT_EQ(t.hat, (std::vector<std::size_t>{3, 2, 1, 0}));
  for (const auto& m : t.m) EXPECT_EQ(m, Rat(1));
  EXPECT_EQ(t.default_depth(Rat(2)), 8 + 3 + 1);
}

TEST(Engine, P1AdjointAndS) {
  TargetSpec t = make_projective_target(1);
  STable a = build_s_adjoint(t, Rat(1), 4);
  const auto& a1 = *a.table.find(deg(1));
  EXPECT_EQ(a1(0, 0), mono(Rat(1), -2));
  EXPECT_EQ(a1(1, 0), mono(Rat(-2), -3));
  EXPECT_EQ(a1(0, 1), mono(Rat(1), -1));
  EXPECT_EQ(a1(1, 1), mono(Rat(-1), -2));
  STable s = adjoint_to_s(a, t);
  EXPECT_EQ((*s.table.find(deg(1)))(0, 0), a1(1, 1));
  EXPECT_EQ((*s.table.find(deg(0)))(0, 1), ZSeries<Rat>(0, kExactDepth));
}

TEST(Engine, P1DegreeOneTable) {
  InvariantTable t = pn_two_point(1, 1);
  const Degree d = deg(1);
  const std::size_t one = 0, P = 1;
  EXPECT_EQ(t.value(P, 0, P, 0, d), Rat(1));
  EXPECT_EQ(t.value(P, 1, one, 0, d), Rat(1));
  EXPECT_EQ(t.value(one, 0, P, 1, d), Rat(1));
  EXPECT_EQ(t.value(P, 0, one, 1, d), Rat(-1));
  EXPECT_EQ(t.value(one, 1, P, 0, d), Rat(-1));
  EXPECT_EQ(t.value(one, 1, one, 1, d), Rat(2));
  EXPECT_EQ(t.value(one, 2, one, 0, d), Rat(-2));
  EXPECT_EQ(t.value(one, 0, one, 2, d), Rat(-2));
  EXPECT_EQ(t.values.size(), 8u);
}

TEST(Engine, P1UnitarityAndCorruption) {
  TargetSpec t = make_projective_target(1);
  STable a = build_s_adjoint(t, Rat(3), t.default_depth(Rat(3)));
  EXPECT_TRUE(check_unitarity(a, t, Rat(3)).pass);

  STable bad = a;
  auto* m = const_cast<SeriesMatrix*>(bad.table.find(deg(2)));
  (*m)(0, 0).add(-3, Rat(1, 7));
  UnitarityReport r = check_unitarity(bad, t, Rat(3));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(*r.degree, deg(2));
  EXPECT_THROW(build_r(bad, t, Rat(3)), DivisibilityError);
}

TEST(Engine, P2LineThroughTwoPoints) {
  InvariantTable t = pn_two_point(2, 1);
  EXPECT_EQ(t.value(2, 0, 2, 0, deg(1)), Rat(1));
}

TEST(Engine, ConsistencyChecksOnProjectiveTables) {
  for (int n = 1; n <= 3; ++n) {
    TargetSpec t = make_projective_target(n);
    Rat bound(n == 3 ? 2 : 3);
    Computation c = compute_two_point(t, bound, t.default_depth(bound));
    EXPECT_TRUE(c.unitarity.pass) << c.unitarity.str();
    CheckReport sd = check_string_divisor(c.invariants, c.one_point, t);
    EXPECT_TRUE(sd.pass) << sd.str();
    EXPECT_GT(sd.skipped, 0u);
    EXPECT_TRUE(check_swap_symmetry(c.invariants).pass);
    CheckReport dim = check_dimension(c.invariants);
    EXPECT_TRUE(dim.pass) << dim.str();
  }
}

TEST(Engine, EmptyTableAtDegreeZero) {
  InvariantTable t = pn_two_point(1, 0);
  EXPECT_TRUE(t.values.empty());
  EXPECT_TRUE(t.c1.empty());
}

TEST(Engine, ThreadedMatchesSequential) {
  TargetSpec t = make_projective_target(2);
  Rat bound(2);
  int depth = t.default_depth(bound);
  auto seq = compute_two_point(t, bound, depth, 1).invariants;
  auto par = compute_two_point(t, bound, depth, 4).invariants;
  EXPECT_EQ(seq, par);
}
