#include "divfield/curve.hpp"

#include <gtest/gtest.h>

#include <random>

namespace divfield {
namespace {

Polynomial<Rational> poly(std::vector<long> c) {
  std::vector<Rational> r(c.begin(), c.end());
  return {Rational(0), r};
}

// y^2 = x^3 - x: a4 = -1, everything else 0.
Curve cm_curve() { return Curve(Tower{}, {Rational(-1), Rational(0), Rational(1)}); }

struct Fixture {
  GeneratorSet g;
  Curve c;
  Torsion t;
};

const Fixture& small_fixture() {
  static const Fixture f = [] {
    auto g = build_tower({CurveMode::degree3, {0, 1, 2}});
    Curve c(g);
    auto t = enumerate_torsion(c);
    return Fixture{g, c, t};
  }();
  return f;
}

TEST(DivisionPolynomial, ShortWeierstrassExamples) {
  // psi3 = 3x^4 + 6ax^2 + 12bx - a^2 and psi4/(2y) = 2x^6 + 10ax^4 + 40bx^3 - 10a^2x^2 - 8abx
  // - 2a^3 - 16b^2, at a = -1, b = 0.
  const Curve c = cm_curve();
  EXPECT_EQ(division_polynomial(c, 3), poly({-1, 0, -6, 0, 3}));
  EXPECT_EQ(division_polynomial(c, 4), poly({2, 0, -10, 0, -10, 0, 2}));
  EXPECT_EQ(division_polynomial(c, 1), poly({1}));
  EXPECT_THROW(division_polynomial(c, 9), std::out_of_range);
  EXPECT_EQ(division_polynomial(c, 8).degree(), 30);
  EXPECT_EQ(division_polynomial(c, 7).degree(), 24);
}

TEST(DivisionPolynomial, VanishesExactlyOnTorsion) {
  const auto& f = small_fixture();
  for (std::size_t i = 0; i < f.t.points.size(); ++i) {
    const Point& p = f.t.points[i];
    for (int n : {2, 4, 8})
      EXPECT_EQ(division_polynomial_vanishes(f.c, n, p), f.t.orders[i] <= n) << i << " n=" << n;
  }
}

TEST(GroupLaw, Axioms) {
  const auto& f = small_fixture();
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> pick(0, f.t.points.size() - 1);
  for (int k = 0; k < 30; ++k) {
    const Point& p = f.t.points[pick(rng)];
    const Point& q = f.t.points[pick(rng)];
    const Point& r = f.t.points[pick(rng)];
    EXPECT_EQ(f.c.add(p, q), f.c.add(q, p));
    EXPECT_EQ(f.c.add(f.c.add(p, q), r), f.c.add(p, f.c.add(q, r)));
    EXPECT_TRUE(f.c.add(p, f.c.neg(p)).infinity);
    EXPECT_GE(f.t.index_of(f.c.add(p, q)), 0);  // closure of E[8]
    EXPECT_EQ(f.c.dbl(p), f.c.add(p, p));
  }
}

TEST(GroupLaw, InvalidPointRejected) {
  const Curve c = cm_curve();
  const Tower q;
  EXPECT_THROW(c.point(TowerElement(q, Rational(2)), TowerElement(q, Rational(1))), InvalidPoint);
  EXPECT_NO_THROW(c.point(TowerElement(q, Rational(0)), TowerElement(q, Rational(0))));
  EXPECT_THROW(Curve(q, {Rational(1), Rational(1), Rational(2)}), InvalidCurve);
}

TEST(Torsion, CensusAndOrders) {
  const auto& f = small_fixture();
  EXPECT_EQ(f.t.points.size(), 64u);
  EXPECT_EQ(f.t.census(), (std::vector<int>{1, 3, 12, 48}));
  EXPECT_EQ(f.t.of_order_dividing(4).size(), 16u);
  EXPECT_EQ(f.t.max_scratch_levels, 0);
  EXPECT_TRUE(std::is_sorted(f.t.points.begin(), f.t.points.end()));
  for (std::size_t i = 0; i < f.t.points.size(); ++i) {
    EXPECT_TRUE(f.c.on_curve(f.t.points[i]));
    EXPECT_TRUE(f.c.mul(8, f.t.points[i]).infinity);
    if (f.t.orders[i] == 8) {
      EXPECT_FALSE(f.c.mul(4, f.t.points[i]).infinity);
    }
  }
}

TEST(Halving, HalvesDoubleBackAndDifferByTwoTorsion) {
  const auto& f = small_fixture();
  const auto e2 = f.c.two_torsion();
  for (const Point& p : f.t.of_order_dividing(4)) {
    const Halving h = halve(f.c, p);
    ASSERT_EQ(h.halves.size(), 4u);
    std::vector<Point> diffs;
    for (const Point& q : h.halves) {
      EXPECT_EQ(f.c.dbl(q), p);
      diffs.push_back(f.c.add(q, f.c.neg(h.halves[0])));
    }
    std::sort(diffs.begin(), diffs.end());
    EXPECT_EQ(diffs, e2);
  }
}

TEST(Halving, LeavingTheTowerIsReported) {
  // Halves of (0, 0) on y^2 = x^3 - x need i, which Q lacks.
  const Curve c = cm_curve();
  const Point p = Point::affine(TowerElement(Tower{}, Rational(0)), TowerElement(Tower{}, Rational(0)));
  EXPECT_THROW(halve(c, p), HalvingFailure);
  EXPECT_THROW(halve(c, p, 0), HalvingFailure);
}

TEST(Polynomial, Arithmetic) {
  const auto p = poly({1, 1});  // 1 + x
  const auto q = poly({-1, 1});
  EXPECT_EQ(p * q, poly({-1, 0, 1}));
  EXPECT_EQ((p - p).degree(), -1);
  EXPECT_EQ(p(Rational(3)), 4);
  EXPECT_EQ(evaluate(p * q, TowerElement(Tower{}, Rational(5))).coeffs()[0], 24);
}

}  // namespace
}  // namespace divfield
