#pragma once

// Towers of quadratic extensions of Q.
//
// A tower with L levels is Q(s_1, ..., s_L) where s_k^2 = d_k and d_k lies in
// the sub-tower of the first k-1 levels. Elements are dense coefficient
// vectors over the power-product basis {s_S : S subset of levels}, indexed by
// bitmask with level k at bit k-1. The top level therefore splits a vector
// into a low half (no s_L) and a high half (coefficient of s_L), which is the
// shape every kernel below recurses on.

#include "divfield/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace divfield {

struct StructuralError : std::logic_error {
  using std::logic_error::logic_error;
};
struct DivisionByZero : std::domain_error {
  using std::domain_error::domain_error;
};
struct DegenerateRadicand : std::domain_error {
  using std::domain_error::domain_error;
};

using Coeffs = std::vector<Rational>;

namespace detail {

struct Level {
  std::string label;
  Coeffs radicand;  // over the sub-tower below this level
};
using LevelPtr = std::shared_ptr<const Level>;

inline bool is_zero(std::span<const Rational> x) {
  return std::all_of(x.begin(), x.end(), [](const Rational& r) { return sgn(r) == 0; });
}

inline Coeffs zeros(std::size_t n) { return Coeffs(n, Rational(0)); }

inline void add_to(std::span<Rational> acc, std::span<const Rational> x) {
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (sgn(x[i]) != 0) acc[i] += x[i];
}

inline void sub_from(std::span<Rational> acc, std::span<const Rational> x) {
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (sgn(x[i]) != 0) acc[i] -= x[i];
}

inline Coeffs scaled(std::span<const Rational> x, const Rational& c) {
  Coeffs out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    if (sgn(x[i]) != 0) out[i] = x[i] * c;
  return out;
}

inline Coeffs concat(Coeffs lo, const Coeffs& hi) {
  lo.insert(lo.end(), hi.begin(), hi.end());
  return lo;
}

// Product in the sub-tower of depth k; levels[0..k) describe it.
inline Coeffs mul(std::span<const Rational> x, std::span<const Rational> y,
                  std::span<const LevelPtr> levels) {
  const std::size_t k = levels.size();
  if (k == 0) return {x[0] * y[0]};
  const std::size_t n = std::size_t{1} << k;
  if (is_zero(x) || is_zero(y)) return zeros(n);
  const std::size_t h = n / 2;
  const auto below = levels.first(k - 1);
  const auto a = x.first(h), b = x.subspan(h);
  const auto c = y.first(h), e = y.subspan(h);
  const bool bz = is_zero(b), ez = is_zero(e);
  if (bz && ez) return concat(mul(a, c, below), zeros(h));
  if (bz) return concat(mul(a, c, below), mul(a, e, below));
  if (ez) return concat(mul(a, c, below), mul(b, c, below));
  Coeffs ac = mul(a, c, below);
  Coeffs be = mul(b, e, below);
  // Karatsuba: ae + bc = (a + b)(c + e) - ac - be
  Coeffs apb(a.begin(), a.end()), cpe(c.begin(), c.end());
  add_to(apb, b);
  add_to(cpe, e);
  Coeffs hi = mul(apb, cpe, below);
  sub_from(hi, ac);
  sub_from(hi, be);
  Coeffs lo = std::move(ac);
  add_to(lo, mul(be, levels[k - 1]->radicand, below));
  return concat(std::move(lo), hi);
}

inline Coeffs square(std::span<const Rational> x, std::span<const LevelPtr> levels) {
  return mul(x, x, levels);
}

// a^2 - b^2 d for x = a + b s at the top of `levels`.
inline Coeffs norm_down(std::span<const Rational> a, std::span<const Rational> b,
                        std::span<const LevelPtr> levels) {
  const auto below = levels.first(levels.size() - 1);
  Coeffs out = square(a, below);
  if (!is_zero(b)) sub_from(out, mul(square(b, below), levels.back()->radicand, below));
  return out;
}

inline Coeffs inv(std::span<const Rational> x, std::span<const LevelPtr> levels) {
  const std::size_t k = levels.size();
  if (k == 0) {
    if (sgn(x[0]) == 0) throw DivisionByZero("inverse of zero");
    return {1 / x[0]};
  }
  const std::size_t h = std::size_t{1} << (k - 1);
  const auto below = levels.first(k - 1);
  const auto a = x.first(h), b = x.subspan(h);
  if (is_zero(b)) return concat(inv(a, below), zeros(h));
  // (a + b s)^-1 = (a - b s) / (a^2 - b^2 d)
  const Coeffs ninv = inv(norm_down(a, b, levels), below);
  Coeffs lo = mul(a, ninv, below);
  Coeffs hi = mul(b, ninv, below);
  for (auto& r : hi) r = -r;
  return concat(std::move(lo), hi);
}

// Some square root of x in the sub-tower described by `levels`, or nothing.
// Writing x = a + b s with s^2 = d:
//   b = 0: sqrt(a) below, else sqrt(a/d) * s;
//   b != 0: (u + v s)^2 = x forces u^2 = (a +- n)/2 with n^2 = a^2 - b^2 d,
//           and v = b / (2u).
inline std::optional<Coeffs> sqrt(std::span<const Rational> x, std::span<const LevelPtr> levels) {
  const std::size_t k = levels.size();
  if (k == 0) {
    auto r = rational_sqrt(x[0]);
    if (!r) return std::nullopt;
    return Coeffs{*r};
  }
  const std::size_t h = std::size_t{1} << (k - 1);
  const auto below = levels.first(k - 1);
  const auto a = x.first(h), b = x.subspan(h);
  if (is_zero(b)) {
    if (auto r = sqrt(a, below)) return concat(std::move(*r), zeros(h));
    const Coeffs& d = levels.back()->radicand;
    if (auto c = sqrt(mul(a, inv(d, below), below), below)) return concat(zeros(h), *c);
    return std::nullopt;
  }
  const auto n = sqrt(norm_down(a, b, levels), below);
  if (!n) return std::nullopt;
  for (int sign : {+1, -1}) {
    Coeffs t(a.begin(), a.end());
    if (sign > 0)
      add_to(t, *n);
    else
      sub_from(t, *n);
    for (auto& r : t) r /= 2;
    if (is_zero(t)) continue;
    auto u = sqrt(t, below);
    if (!u) continue;
    Coeffs twice_u = *u;
    for (auto& r : twice_u) r *= 2;
    Coeffs v = mul(b, inv(twice_u, below), below);
    return concat(std::move(*u), v);
  }
  return std::nullopt;
}

}  // namespace detail

/// An ordered list of quadratic adjunctions over Q. Immutable; copies share
/// their levels, and a tower built by adjoining to `t` has `t` as a prefix.
class Tower {
 public:
  Tower() = default;

  std::size_t depth() const { return levels_.size(); }
  std::size_t dimension() const { return std::size_t{1} << levels_.size(); }
  const std::string& label(std::size_t k) const { return levels_.at(k)->label; }
  const Coeffs& radicand_coeffs(std::size_t k) const { return levels_.at(k)->radicand; }

  std::optional<std::size_t> find(std::string_view label) const {
    for (std::size_t k = 0; k < levels_.size(); ++k)
      if (levels_[k]->label == label) return k;
    return std::nullopt;
  }

  /// Sub-tower of the first k levels.
  Tower prefix(std::size_t k) const {
    Tower t;
    t.levels_.assign(levels_.begin(), levels_.begin() + static_cast<std::ptrdiff_t>(k));
    return t;
  }

  bool is_prefix_of(const Tower& other) const {
    if (depth() > other.depth()) return false;
    for (std::size_t k = 0; k < depth(); ++k)
      if (levels_[k] != other.levels_[k]) return false;
    return true;
  }

  friend bool operator==(const Tower& a, const Tower& b) {
    return a.is_prefix_of(b) && b.depth() == a.depth();
  }

  /// "Q(zeta4,A2,...)"
  std::string id() const {
    std::string s = "Q(";
    for (std::size_t k = 0; k < depth(); ++k) s += (k ? "," : "") + label(k);
    return s + ")";
  }

  std::span<const detail::LevelPtr> levels() const { return levels_; }

  Tower extended(std::string label, Coeffs radicand) const {
    if (find(label)) throw StructuralError("duplicate tower label '" + label + "'");
    Tower t = *this;
    t.levels_.push_back(
        std::make_shared<const detail::Level>(detail::Level{std::move(label), std::move(radicand)}));
    return t;
  }

 private:
  std::vector<detail::LevelPtr> levels_;
};

/// An element of a tower as a coefficient vector over the canonical basis.
class TowerElement {
 public:
  TowerElement() : c_{Rational(0)} {}
  TowerElement(Tower t, Coeffs c) : t_(std::move(t)), c_(std::move(c)) {
    if (c_.size() != t_.dimension())
      throw StructuralError("coefficient vector does not match tower dimension");
  }
  TowerElement(Tower t, const Rational& r) : t_(std::move(t)), c_(t_.dimension(), Rational(0)) {
    c_[0] = r;
  }

  static TowerElement zero(const Tower& t) { return {t, Rational(0)}; }
  static TowerElement one(const Tower& t) { return {t, Rational(1)}; }
  /// The adjoined square root s_{k+1} (level index k, 0-based).
  static TowerElement generator(const Tower& t, std::size_t k) {
    return monomial(t, std::size_t{1} << k);
  }
  static TowerElement monomial(const Tower& t, std::size_t mask) {
    Coeffs c(t.dimension(), Rational(0));
    c.at(mask) = 1;
    return {t, std::move(c)};
  }

  const Tower& tower() const { return t_; }
  const Coeffs& coeffs() const { return c_; }
  bool is_zero() const { return detail::is_zero(c_); }
  bool is_rational() const {
    return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& r) { return sgn(r) == 0; });
  }

  /// The same element viewed in an extension of its tower.
  TowerElement embed(const Tower& target) const {
    if (!t_.is_prefix_of(target))
      throw StructuralError("cannot embed " + t_.id() + " into " + target.id());
    if (target.depth() == t_.depth()) return {target, c_};
    Coeffs c = c_;
    c.resize(target.dimension(), Rational(0));
    return {target, std::move(c)};
  }

  /// Inverse of embed: succeeds only if no coefficient uses levels beyond
  /// the first `target.depth()`.
  std::optional<TowerElement> restrict_to(const Tower& target) const {
    if (!target.is_prefix_of(t_))
      throw StructuralError("cannot restrict " + t_.id() + " to " + target.id());
    const std::size_t n = target.dimension();
    if (!detail::is_zero(std::span<const Rational>(c_).subspan(n))) return std::nullopt;
    return TowerElement(target, Coeffs(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(n)));
  }

  TowerElement operator-() const {
    Coeffs c = c_;
    for (auto& r : c) r = -r;
    return {t_, std::move(c)};
  }

  friend TowerElement operator+(const TowerElement& x, const TowerElement& y) {
    auto [a, b] = unify(x, y);
    Coeffs c = a.c_;
    detail::add_to(c, b.c_);
    return {a.t_, std::move(c)};
  }
  friend TowerElement operator-(const TowerElement& x, const TowerElement& y) {
    auto [a, b] = unify(x, y);
    Coeffs c = a.c_;
    detail::sub_from(c, b.c_);
    return {a.t_, std::move(c)};
  }
  friend TowerElement operator*(const TowerElement& x, const TowerElement& y) {
    auto [a, b] = unify(x, y);
    return {a.t_, detail::mul(a.c_, b.c_, a.t_.levels())};
  }
  friend TowerElement operator*(const TowerElement& x, const Rational& r) {
    return {x.t_, detail::scaled(x.c_, r)};
  }
  friend TowerElement operator*(const Rational& r, const TowerElement& x) { return x * r; }
  friend TowerElement operator+(TowerElement x, const Rational& r) {
    x.c_[0] += r;
    return x;
  }
  friend TowerElement operator-(TowerElement x, const Rational& r) {
    x.c_[0] -= r;
    return x;
  }
  friend TowerElement operator/(const TowerElement& x, const TowerElement& y) {
    return x * y.inverse();
  }
  friend TowerElement operator/(const TowerElement& x, const Rational& r) {
    if (sgn(r) == 0) throw DivisionByZero("division by rational zero");
    return x * Rational(1 / r);
  }

  TowerElement inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero tower element");
    return {t_, detail::inv(c_, t_.levels())};
  }

  TowerElement squared() const { return {t_, detail::square(c_, t_.levels())}; }

  friend bool operator==(const TowerElement& x, const TowerElement& y) {
    if (x.t_.is_prefix_of(y.t_) || y.t_.is_prefix_of(x.t_)) {
      const auto& big = x.c_.size() >= y.c_.size() ? x.c_ : y.c_;
      const auto& small = x.c_.size() >= y.c_.size() ? y.c_ : x.c_;
      return std::equal(small.begin(), small.end(), big.begin()) &&
             detail::is_zero(std::span<const Rational>(big).subspan(small.size()));
    }
    throw StructuralError("comparing elements of unrelated towers");
  }

  /// Lexicographic order on coefficient vectors (same tower).
  friend bool operator<(const TowerElement& x, const TowerElement& y) {
    auto [a, b] = unify(x, y);
    return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
  }

  /// Brings two elements into the larger of their (nested) towers.
  static std::pair<TowerElement, TowerElement> unify(const TowerElement& x,
                                                     const TowerElement& y) {
    if (x.t_.depth() == y.t_.depth()) {
      if (!(x.t_ == y.t_)) throw StructuralError("mismatched towers " + x.t_.id() + " / " + y.t_.id());
      return {x, y};
    }
    if (x.t_.is_prefix_of(y.t_)) return {x.embed(y.t_), y};
    if (y.t_.is_prefix_of(x.t_)) return {x, y.embed(x.t_)};
    throw StructuralError("mismatched towers " + x.t_.id() + " / " + y.t_.id());
  }

 private:
  Tower t_;
  Coeffs c_;
};

/// Selects between x and -x: the one whose first nonzero coefficient is
/// positive.
inline TowerElement canonical_sign(const TowerElement& x) {
  for (const auto& r : x.coeffs()) {
    if (sgn(r) > 0) return x;
    if (sgn(r) < 0) return -x;
  }
  return x;
}

/// Some y with y^2 = x, normalized by canonical_sign, or nothing.
inline std::optional<TowerElement> sqrt_in_tower(const TowerElement& x) {
  auto r = detail::sqrt(x.coeffs(), x.tower().levels());
  if (!r) return std::nullopt;
  return canonical_sign(TowerElement(x.tower(), std::move(*r)));
}

struct Adjunction {
  Tower tower;
  TowerElement root;
  bool extended = false;
};

/// Adjoins a square root of d to t. If d is already a square in t the tower
/// is returned unchanged together with its canonical square root.
inline Adjunction adjoin_sqrt(const Tower& t, const TowerElement& d, std::string label) {
  const TowerElement dd = d.embed(t);
  if (dd.is_zero()) throw DegenerateRadicand("zero radicand for '" + label + "'");
  if (auto r = sqrt_in_tower(dd)) return {t, *r, false};
  Tower ext = t.extended(std::move(label), dd.coeffs());
  return {ext, TowerElement::generator(ext, ext.depth() - 1), true};
}

/// Human-readable form, e.g. "1 + 3/2*A2*zeta8".
inline std::string to_string(const TowerElement& x) {
  std::ostringstream os;
  bool first = true;
  const auto& t = x.tower();
  for (std::size_t m = 0; m < x.coeffs().size(); ++m) {
    const Rational& c = x.coeffs()[m];
    if (sgn(c) == 0) continue;
    std::string mono;
    for (std::size_t k = 0; k < t.depth(); ++k)
      if (m >> k & 1) mono += (mono.empty() ? "" : "*") + t.label(k);
    Rational ac = abs(c);
    if (first) {
      if (sgn(c) < 0) os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    if (mono.empty())
      os << to_string(ac);
    else if (ac == 1)
      os << mono;
    else
      os << to_string(ac) << "*" << mono;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

/// Incrementally maintained row-echelon basis of a Q-subspace of a tower.
class LinearSpan {
 public:
  explicit LinearSpan(std::size_t ambient) : n_(ambient) {}

  std::size_t dimension() const { return rows_.size(); }

  Coeffs reduce(Coeffs v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational f = v[pivots_[i]];
      if (sgn(f) == 0) continue;
      const Coeffs& row = rows_[i];
      for (std::size_t j = pivots_[i]; j < n_; ++j)
        if (sgn(row[j]) != 0) v[j] -= f * row[j];
    }
    return v;
  }

  bool contains(const Coeffs& v) const { return detail::is_zero(reduce(v)); }

  /// Adds v; returns false if it was already in the span.
  bool insert(const Coeffs& v) {
    Coeffs r = reduce(v);
    auto it = std::find_if(r.begin(), r.end(), [](const Rational& q) { return sgn(q) != 0; });
    if (it == r.end()) return false;
    const auto p = static_cast<std::size_t>(it - r.begin());
    const Rational lead = r[p];
    for (auto& q : r) q /= lead;
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
  }

 private:
  std::size_t n_;
  std::vector<Coeffs> rows_;
  std::vector<std::size_t> pivots_;
};

/// The smallest subalgebra of a tower containing 1 and the given generators,
/// as a Q-subspace. Because the tower is a finite-dimensional field, this is
/// also the subfield they generate.
class SubalgebraClosure {
 public:
  SubalgebraClosure(const Tower& t, const std::vector<TowerElement>& generators)
      : t_(t), span_(t.dimension()) {
    // Multipliers only need to span span(generators): S*g is then covered.
    LinearSpan gen_span(t.dimension());
    std::vector<TowerElement> multipliers;
    for (const auto& g : generators) {
      TowerElement ge = g.embed(t_);
      if (gen_span.insert(ge.coeffs())) multipliers.push_back(ge);
    }
    std::vector<TowerElement> work;
    auto push = [&](const TowerElement& x) {
      if (span_.insert(x.coeffs())) work.push_back(x);
    };
    push(TowerElement::one(t_));
    for (const auto& m : multipliers) push(m);
    while (!work.empty() && span_.dimension() < t_.dimension()) {
      TowerElement b = std::move(work.back());
      work.pop_back();
      for (const auto& m : multipliers) {
        push(b * m);
        if (span_.dimension() == t_.dimension()) break;
      }
    }
  }

  std::size_t dimension() const { return span_.dimension(); }
  bool contains(const TowerElement& x) const { return span_.contains(x.embed(t_).coeffs()); }

 private:
  Tower t_;
  LinearSpan span_;
};

inline bool subalgebra_membership(const std::vector<TowerElement>& generators,
                                  const TowerElement& query) {
  Tower t = query.tower();
  for (const auto& g : generators) {
    if (t.is_prefix_of(g.tower()))
      t = g.tower();
    else if (!g.tower().is_prefix_of(t))
      throw StructuralError("subalgebra generators live in unrelated towers");
  }
  return SubalgebraClosure(t, generators).contains(query);
}

}  // namespace divfield
