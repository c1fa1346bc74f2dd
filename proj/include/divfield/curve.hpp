#pragma once

// y^2 = (x - e1)(x - e2)(x - e3) over a tower, its group law, halving, and
// the explicit 2-, 4- and 8-torsion.

#include "divfield/finite_group.hpp"
#include "divfield/polynomial.hpp"
#include "divfield/tower.hpp"
#include "divfield/towergen.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace divfield {

struct InvalidPoint : std::domain_error {
  using std::domain_error::domain_error;
};

struct HalvingFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Point {
  bool infinity = true;
  TowerElement x, y;

  static Point at_infinity() { return {}; }
  static Point affine(TowerElement x, TowerElement y) {
    auto [ux, uy] = TowerElement::unify(x, y);
    return {false, std::move(ux), std::move(uy)};
  }

  friend bool operator==(const Point& p, const Point& q) {
    if (p.infinity || q.infinity) return p.infinity == q.infinity;
    return p.x == q.x && p.y == q.y;
  }
  /// Infinity first, then by x, then by y.
  friend bool operator<(const Point& p, const Point& q) {
    if (p.infinity || q.infinity) return p.infinity && !q.infinity;
    if (p.x < q.x) return true;
    if (q.x < p.x) return false;
    return p.y < q.y;
  }
};

inline std::string to_string(const Point& p) {
  return p.infinity ? "O" : "(" + to_string(p.x) + ", " + to_string(p.y) + ")";
}

/// Horner evaluation of a rational polynomial at a tower element.
inline TowerElement evaluate(const Polynomial<Rational>& f, const TowerElement& v) {
  TowerElement acc = TowerElement::zero(v.tower());
  for (auto it = f.coeffs().rbegin(); it != f.coeffs().rend(); ++it) acc = acc * v + *it;
  return acc;
}

class Curve {
 public:
  Curve(Tower t, const Triple& roots) : t_(std::move(t)), e_(roots) {
    if (e_[0] == e_[1] || e_[1] == e_[2] || e_[0] == e_[2])
      throw InvalidCurve("curve roots must be distinct");
    a2_ = -(e_[0] + e_[1] + e_[2]);
    a4_ = e_[0] * e_[1] + e_[1] * e_[2] + e_[2] * e_[0];
    a6_ = -(e_[0] * e_[1] * e_[2]);
  }
  explicit Curve(const GeneratorSet& g) : Curve(g.tower, g.cubic) {}

  const Tower& tower() const { return t_; }
  const Triple& roots() const { return e_; }
  const Rational& a2() const { return a2_; }
  const Rational& a4() const { return a4_; }
  const Rational& a6() const { return a6_; }

  TowerElement rhs(const TowerElement& x) const { return ((x + a2_) * x + a4_) * x + a6_; }

  bool on_curve(const Point& p) const { return p.infinity || p.y.squared() == rhs(p.x); }

  Point point(const TowerElement& x, const TowerElement& y) const {
    Point p = Point::affine(x.embed(t_), y.embed(t_));
    if (!on_curve(p)) throw InvalidPoint("point not on curve: " + to_string(p));
    return p;
  }

  std::vector<Point> two_torsion() const {
    std::vector<Point> out{Point::at_infinity()};
    for (const auto& e : e_) out.push_back(Point::affine(TowerElement(t_, e), TowerElement::zero(t_)));
    std::sort(out.begin(), out.end());
    return out;
  }

  Point neg(const Point& p) const { return p.infinity ? p : Point{false, p.x, -p.y}; }

  Point add(const Point& p, const Point& q) const {
    if (p.infinity) return q;
    if (q.infinity) return p;
    if (p.x == q.x) {
      if (p.y == q.y) return dbl(p);
      return Point::at_infinity();
    }
    const auto lambda = (q.y - p.y) / (q.x - p.x);
    return chord(p, q.x, lambda);
  }

  Point dbl(const Point& p) const {
    if (p.infinity || p.y.is_zero()) return Point::at_infinity();
    const auto lambda = ((Rational(3) * p.x + Rational(2) * a2_) * p.x + a4_) / (Rational(2) * p.y);
    return chord(p, p.x, lambda);
  }

  Point mul(long n, const Point& p) const {
    if (n < 0) return mul(-n, neg(p));
    Point acc = Point::at_infinity(), base = p;
    for (; n; n >>= 1) {
      if (n & 1) acc = add(acc, base);
      if (n > 1) base = dbl(base);
    }
    return acc;
  }

  /// Order of a torsion point, searched up to `bound`; 0 if larger.
  int order(const Point& p, int bound = 64) const {
    Point q = p;
    for (int n = 1; n <= bound; ++n) {
      if (q.infinity) return n;
      q = add(q, p);
    }
    return 0;
  }

 private:
  Point chord(const Point& p, const TowerElement& x2, const TowerElement& lambda) const {
    auto x3 = lambda.squared() - a2_ - p.x - x2;
    auto y3 = -(lambda * (x3 - p.x) + p.y);
    return Point::affine(std::move(x3), std::move(y3));
  }

  Tower t_;
  Triple e_;
  Rational a2_, a4_, a6_;
};

struct Halving {
  std::vector<Point> halves;  // sorted, four points
  int scratch_levels = 0;
};

/// The four Q with 2Q = P. With r_i^2 = x0 - e_i and r1 r2 r3 = -y0,
/// Q = (x0 + r1r2 + r2r3 + r3r1, -(r1 + r2)(r2 + r3)(r3 + r1)). Square roots
/// missing from the curve's tower are taken in temporary extensions, at most
/// `max_scratch` of them; the halves must land back in the curve's tower.
inline Halving halve(const Curve& c, const Point& p, int max_scratch = 3) {
  Halving h;
  if (p.infinity) {
    h.halves = c.two_torsion();
    return h;
  }
  Tower work = c.tower();
  std::array<TowerElement, 3> r;
  for (int i = 0; i < 3; ++i) {
    const auto v = (p.x - c.roots()[i]).embed(work);
    if (auto s = sqrt_in_tower(v)) {
      r[i] = *s;
      continue;
    }
    if (h.scratch_levels >= max_scratch)
      throw HalvingFailure("more than " + std::to_string(max_scratch) + " scratch levels needed");
    ++h.scratch_levels;
    Adjunction a = adjoin_sqrt(work, v, "scratch" + std::to_string(h.scratch_levels));
    work = a.tower;
    r[i] = a.root;
  }
  for (auto& v : r) v = v.embed(work);
  const auto target = -p.y.embed(work);
  for (int mask = 0; mask < 8; ++mask) {
    std::array<TowerElement, 3> s = r;
    for (int i = 0; i < 3; ++i)
      if (mask >> i & 1) s[i] = -s[i];
    if (!(s[0] * s[1] * s[2] == target)) continue;
    auto x = p.x.embed(work) + s[0] * s[1] + s[1] * s[2] + s[2] * s[0];
    auto y = -((s[0] + s[1]) * (s[1] + s[2]) * (s[2] + s[0]));
    auto rx = x.restrict_to(c.tower());
    auto ry = y.restrict_to(c.tower());
    if (!rx || !ry) throw HalvingFailure("half of " + to_string(p) + " leaves the tower");
    Point q = Point::affine(*rx, *ry);
    if (std::find(h.halves.begin(), h.halves.end(), q) == h.halves.end()) h.halves.push_back(q);
  }
  if (h.halves.size() != 4) throw InvariantViolation("halving produced " + std::to_string(h.halves.size()) + " points");
  for (const auto& q : h.halves)
    if (!c.on_curve(q) || !(c.dbl(q) == p))
      throw InvariantViolation("halving check 2Q = P failed for " + to_string(p));
  std::sort(h.halves.begin(), h.halves.end());
  return h;
}

struct Torsion {
  std::vector<Point> points;  // E[8], sorted
  std::vector<int> orders;
  int max_scratch_levels = 0;

  int index_of(const Point& p) const {
    auto it = std::lower_bound(points.begin(), points.end(), p);
    if (it == points.end() || !(*it == p)) return -1;
    return static_cast<int>(it - points.begin());
  }
  std::vector<int> census() const {  // number of points of order 1, 2, 4, 8
    std::vector<int> c(4, 0);
    for (int o : orders) c[o == 1 ? 0 : o == 2 ? 1 : o == 4 ? 2 : 3]++;
    return c;
  }
  std::vector<Point> of_order_dividing(int n) const {
    std::vector<Point> out;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (n % orders[i] == 0) out.push_back(points[i]);
    return out;
  }
};

/// E[8] by halving E[2] twice.
inline Torsion enumerate_torsion(const Curve& c) {
  Torsion t;
  std::vector<Point> layer = c.two_torsion(), all = layer;
  for (int step = 0; step < 2; ++step) {
    std::vector<Point> next;
    for (const auto& p : layer) {
      if (p.infinity) continue;
      Halving h = halve(c, p);
      t.max_scratch_levels = std::max(t.max_scratch_levels, h.scratch_levels);
      next.insert(next.end(), h.halves.begin(), h.halves.end());
    }
    all.insert(all.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (all.size() != 64) throw InvariantViolation("|E[8]| = " + std::to_string(all.size()));
  t.points = std::move(all);
  for (const auto& p : t.points) {
    const int o = c.order(p, 8);
    if (o == 0 || 8 % o != 0) throw InvariantViolation("point of order not dividing 8");
    t.orders.push_back(o);
  }
  return t;
}

/// psi_n for n <= 8, with the factor 2y removed when n is even. F = 4 * rhs
/// stands in for (2y)^2.
inline Polynomial<Rational> division_polynomial(const Curve& c, int n) {
  if (n < 1 || n > 8) throw std::out_of_range("division polynomial index must be 1..8");
  using P = Polynomial<Rational>;
  const Rational zero(0);
  const Rational b2 = 4 * c.a2(), b4 = 2 * c.a4(), b6 = 4 * c.a6();
  const Rational b8 = b2 * c.a6() - c.a4() * c.a4();
  auto poly = [&](std::vector<Rational> v) { return P(zero, std::move(v)); };
  std::vector<P> f(9, P(zero));
  f[1] = f[2] = poly({1});
  f[3] = poly({b8, 3 * b6, 3 * b4, b2, 3});
  f[4] = poly({b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6, 5 * b4, b2, 2});
  const P F = poly({4 * c.a6(), 4 * c.a4(), 4 * c.a2(), 4});
  const P F2 = F * F;
  f[5] = F2 * f[4] - f[3] * f[3] * f[3];
  f[6] = f[3] * (f[5] * f[2] * f[2] - f[1] * f[4] * f[4]);
  f[7] = f[5] * f[3] * f[3] * f[3] - F2 * f[2] * f[4] * f[4] * f[4];
  f[8] = f[4] * (f[6] * f[3] * f[3] - f[2] * f[5] * f[5]);
  return f[n];
}

/// Whether psi_n vanishes at an affine point P, i.e. nP = O.
inline bool division_polynomial_vanishes(const Curve& c, int n, const Point& p) {
  if (p.infinity) return true;
  if (p.y.is_zero()) return n % 2 == 0;
  return evaluate(division_polynomial(c, n), p.x).is_zero();
}

struct DivisionFieldReport {
  bool coordinates_in_tower = false;  // every coordinate of E[8] lives in the built tower
  int max_scratch_levels = 0;         // temporary levels used while halving
  std::size_t tower_dimension = 0;
  std::size_t closure_dimension = 0;  // Q-algebra generated by the coordinates
  std::vector<std::pair<std::string, bool>> members;  // zeta8, A_i, B_i in that algebra

  bool pass() const {
    bool ok = coordinates_in_tower && closure_dimension == tower_dimension;
    for (const auto& m : members) ok = ok && m.second;
    return ok;
  }
};

/// Both inclusions between the tower and Q(E[8]).
inline DivisionFieldReport check_division_field(const GeneratorSet& g, const Torsion& tor) {
  DivisionFieldReport rep;
  rep.max_scratch_levels = tor.max_scratch_levels;
  rep.tower_dimension = g.tower.dimension();
  rep.coordinates_in_tower = tor.points.size() == 64;
  std::vector<TowerElement> coords;
  for (const auto& p : tor.points) {
    if (p.infinity) continue;
    rep.coordinates_in_tower = rep.coordinates_in_tower && p.x.tower() == g.tower && p.y.tower() == g.tower;
    coords.push_back(p.x);
    coords.push_back(p.y);
  }
  const SubalgebraClosure closure(g.tower, coords);
  rep.closure_dimension = closure.dimension();
  rep.members.emplace_back("zeta8", closure.contains(g.zeta8));
  for (int i = 0; i < 3; ++i) rep.members.emplace_back("A" + std::to_string(i + 1), closure.contains(g.A[i]));
  for (int i = 0; i < 3; ++i) rep.members.emplace_back("B" + std::to_string(i + 1), closure.contains(g.B[i]));
  return rep;
}

}  // namespace divfield
