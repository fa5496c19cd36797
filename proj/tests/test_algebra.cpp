#include <random>

#include <gtest/gtest.h>

#include "twopoint/algebra.hpp"

using namespace twopoint;

namespace {

using S = ZSeries<Rat>;
using B = BiZSeries<Rat>;

S poly(std::initializer_list<std::pair<int, Rat>> terms) {
  int top = 0;
  for (const auto& t : terms) top = std::max(top, t.first);
  S s(top, kExactDepth);
  for (const auto& [e, c] : terms) s.set(e, c);
  return s;
}

B bi(std::initializer_list<std::tuple<int, int, Rat>> terms) {
  B b;
  for (const auto& [e1, e2, c] : terms) b.add(e1, e2, c);
  return b;
}

Rat random_rat(std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  return Rat(num(rng), den(rng));
}

S random_series(std::mt19937& rng, int depth) {
  S s(0, depth);
  std::uniform_int_distribution<int> count(0, 5), exp(-depth, 0);
  for (int i = count(rng); i > 0; --i) s.add(exp(rng), random_rat(rng));
  return s;
}

CohClass random_nilpotent(std::mt19937& rng, int dim) {
  CohClass c(Rat(0), 1, dim);
  for (int p = 1; p <= dim; ++p) c += CohClass::monomial(Rat(0), 1, dim, {p}, random_rat(rng));
  return c;
}

}  // namespace

TEST(Rat, CanonicalForm) {
  Rat r(6, -4);
  EXPECT_EQ(r.str(), "-3/2");
  EXPECT_EQ(r.den(), 2);
  EXPECT_EQ(Rat::parse("10/4"), Rat(5, 2));
  EXPECT_EQ(Rat::parse("7").str(), "7");
  EXPECT_THROW(Rat(1, 0), ArithmeticError);
  EXPECT_THROW(Rat(1) / Rat(0), ArithmeticError);
  EXPECT_THROW(Rat::parse("1/x"), ValidationError);
  EXPECT_EQ(Rat(-7, 2).floor(), -4);
  EXPECT_EQ(Rat(-7, 2).frac(), Rat(1, 2));
}

TEST(Rat, FieldAxiomsOnRandomTriples) {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    Rat a = random_rat(rng), b = random_rat(rng), c = random_rat(rng);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    if (!b.is_zero()) EXPECT_EQ(a / b * b, a);
  }
}

TEST(CohClass, NilpotencyAndSectors) {
  CohClass P = CohClass::generator(Rat(0), 1, 1, 0);
  EXPECT_TRUE((P * P).is_zero());
  EXPECT_TRUE(P.nilpotent());
  CohClass q = CohClass::generator(Rat(1, 2), 1, 0, 0);
  EXPECT_TRUE(q.is_zero());
  CohClass one_half = CohClass::constant(Rat(1, 2), 1, 0, Rat(1));
  EXPECT_THROW(P * one_half, SectorError);
  EXPECT_THROW(P + one_half, SectorError);
  EXPECT_EQ(CohClass() * P, CohClass());
}

TEST(ZSeries, SpecExamples) {
  EXPECT_EQ(poly({{0, 1}, {-1, 1}}) * poly({{0, 1}, {-1, -1}}), poly({{0, 1}, {-2, -1}}));
  S a = poly({{0, 3}, {-2, Rat(1, 2)}});
  EXPECT_EQ(a * S::constant(Rat(1)), a);

  CohClass P = CohClass::generator(Rat(0), 1, 1, 0);
  ZSeries<CohClass> pz(-1, kExactDepth);
  pz.set(-1, P);
  EXPECT_TRUE((pz * pz).is_zero());
}

TEST(ZSeries, InvertAffine) {
  const Rat s0(0);
  CohClass P = CohClass::generator(s0, 1, 1, 0);
  CohClass one = CohClass::constant(s0, 1, 1, Rat(1));
  auto inv = invert_affine(P, Rat(1), Rat(1), 10);
  EXPECT_TRUE(inv.exact());
  EXPECT_EQ(inv.coeff(-1), one);
  EXPECT_EQ(inv.coeff(-2), -P);
  EXPECT_EQ(inv.terms().size(), 2u);

  auto sq = inv * inv;
  EXPECT_EQ(sq.coeff(-2), one);
  EXPECT_EQ(sq.coeff(-3), P * Rat(-2));
  EXPECT_EQ(sq.terms().size(), 2u);

  auto scalar = invert_affine(Rat(0), Rat(3), Rat(2), 5);
  EXPECT_EQ(scalar.coeff(-1), Rat(1, 2));
  EXPECT_EQ(scalar.terms().size(), 1u);

  EXPECT_THROW(invert_affine(P, Rat(1), Rat(0), 5), ArithmeticError);
}

TEST(ZSeries, InvertAffineTimesFormIsOne) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    int dim = 1 + trial % 4;
    CohClass c = random_nilpotent(rng, dim);
    Rat w = random_rat(rng), b = random_rat(rng);
    if (w.is_zero()) w = Rat(1);
    if (b.is_zero()) b = Rat(2);
    auto inv = invert_affine(c, w, b, 12);
    ZSeries<CohClass> form(1, kExactDepth);
    form.set(0, c * w);
    form.set(1, CohClass::constant(Rat(0), 1, dim, b));
    auto prod = inv * form;
    ASSERT_EQ(prod.terms().size(), 1u) << prod.str();
    EXPECT_EQ(prod.coeff(0), CohClass::constant(Rat(0), 1, dim, Rat(1)));
  }
}

TEST(ZSeries, InvertAffineTruncatesNonNilpotent) {
  auto inv = invert_affine(Rat(1), Rat(1), Rat(1), 4);
  EXPECT_FALSE(inv.exact());
  EXPECT_EQ(inv.depth(), 4);
  S form = poly({{1, 1}, {0, 1}});
  auto prod = inv * form;
  EXPECT_EQ(prod.depth(), 3);
  EXPECT_EQ(prod, S::constant(Rat(1)));
}

TEST(ZSeries, RingAxiomsOnRandomSeries) {
  std::mt19937 rng(3);
  for (int i = 0; i < 100; ++i) {
    S a = random_series(rng, 6), b = random_series(rng, 5), c = random_series(rng, 7);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * b, b * a);
  }
}

TEST(ZSeries, ProductDepthRule) {
  S a(1, 5), b(-2, 3);
  a.set(1, Rat(1));
  b.set(-2, Rat(1));
  S p = a * b;
  EXPECT_EQ(p.top(), -1);
  EXPECT_EQ(p.depth(), 2);  // min(5 - (-2), 3 - 1)
  EXPECT_THROW(a.with_top(0), ValidationError);
}

TEST(BiZSeries, DivisionExamples) {
  EXPECT_EQ(divide_by_z1_plus_z2(bi({{-2, 0, 1}, {0, -2, -1}})), bi({{-2, -1, 1}, {-1, -2, -1}}));
  EXPECT_EQ(divide_by_z1_plus_z2(bi({{-3, 0, 1}, {0, -3, 1}})),
            bi({{-3, -1, 1}, {-2, -2, -1}, {-1, -3, 1}}));
  EXPECT_EQ(divide_by_z1_plus_z2(bi({{-1, 0, 1}, {0, -1, 1}})), bi({{-1, -1, 1}}));
}

TEST(BiZSeries, NonzeroRemainderThrows) {
  try {
    divide_by_z1_plus_z2(bi({{-1, 0, 1}, {0, -2, 1}}));
    FAIL() << "expected DivisibilityError";
  } catch (const DivisibilityError& e) {
    EXPECT_EQ(e.antidiagonal(), 1);
  }
}

TEST(BiZSeries, DivideThenMultiplyRoundTrips) {
  std::mt19937 rng(5);
  for (int i = 0; i < 50; ++i) {
    B q(kExactDepth, kExactDepth, kExactDepth);
    std::uniform_int_distribution<int> e(-6, -1);
    for (int t = 0; t < 6; ++t) q.add(e(rng), e(rng), random_rat(rng));
    B t = q.times_z1_plus_z2();
    B back = divide_by_z1_plus_z2(t);
    EXPECT_EQ(back, q);
    EXPECT_EQ(back.times_z1_plus_z2(), t);
  }
}

TEST(Novikov, Convolution) {
  NovikovTable<Rat> id(1, Rat(3)), b(1, Rat(3));
  id.set(Degree::scalar(Rat(0)), Rat(1));
  b.set(Degree::scalar(Rat(1)), Rat(5));
  b.set(Degree::scalar(Rat(2)), Rat(-1));
  EXPECT_EQ(novikov_convolve(id, b).entries, b.entries);

  NovikovTable<Rat> x(1, Rat(2)), y(1, Rat(2));
  x.set(Degree::scalar(Rat(1)), Rat(3));
  y.set(Degree::scalar(Rat(1)), Rat(4));
  auto xy = novikov_convolve(x, y);
  ASSERT_EQ(xy.entries.size(), 1u);
  EXPECT_EQ(*xy.find(Degree::scalar(Rat(2))), Rat(12));

  NovikovTable<Rat> h(1, Rat(2)), g(1, Rat(2));
  h.set(Degree::scalar(Rat(1, 2)), Rat(2));
  g.set(Degree::scalar(Rat(1, 2)), Rat(7));
  EXPECT_EQ(*novikov_convolve(h, g).find(Degree::scalar(Rat(1))), Rat(14));

  NovikovTable<Rat> v(2, Rat(2));
  EXPECT_THROW(novikov_convolve(h, v), ValidationError);
  EXPECT_THROW(x.set(Degree::scalar(Rat(3)), Rat(1)), ValidationError);
}

TEST(Novikov, DegreeStrings) {
  EXPECT_EQ(Degree::scalar(Rat(1, 2)).str(), "1/2");
  EXPECT_EQ(Degree({Rat(1), Rat(0)}).str(), "(1,0)");
  EXPECT_EQ(Degree::parse("(1,0)"), Degree({Rat(1), Rat(0)}));
  EXPECT_EQ(Degree::parse("3/2"), Degree::scalar(Rat(3, 2)));
}

TEST(Matrix, InverseAndSolve) {
  Matrix<Rat> m(2, Rat(0));
  m(0, 0) = Rat(2);
  m(0, 1) = Rat(1);
  m(1, 0) = Rat(1);
  m(1, 1) = Rat(1);
  auto inv = inverse(m);
  ASSERT_TRUE(inv);
  EXPECT_EQ((*inv)(0, 0), Rat(1));
  EXPECT_EQ((*inv)(0, 1), Rat(-1));
  EXPECT_EQ((*inv)(1, 1), Rat(2));
  auto x = solve(m, {Rat(3), Rat(2)});
  EXPECT_EQ((*x)[0], Rat(1));
  EXPECT_EQ((*x)[1], Rat(1));
  Matrix<Rat> sing(2, Rat(1));
  EXPECT_FALSE(inverse(sing));
}
