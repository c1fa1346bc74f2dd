#pragma once

// Finite quotients of congruence subgroups of SL2(Z) at 2-power level, the
// two-generator presentation of Gamma(2)'/Gamma(8), and a Todd-Coxeter
// enumerator for the abstract presented group.

#include "divfield/finite_group.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace divfield {

/// 2x2 matrix over Z/2^n with determinant 1, n <= 4.
class Mat2 {
 public:
  static constexpr unsigned max_exponent = 4;

  Mat2(unsigned exponent, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
      : n_(exponent), a_(red(a)), b_(red(b)), c_(red(c)), d_(red(d)) {
    if (n_ < 1 || n_ > max_exponent) throw std::out_of_range("Mat2 modulus exponent out of range");
    if (red(a_ * d_ - b_ * c_) != 1 % modulus())
      throw std::invalid_argument("Mat2 determinant is not 1: " + to_string());
  }

  static Mat2 identity(unsigned exponent) { return {exponent, 1, 0, 0, 1}; }

  unsigned exponent() const { return n_; }
  std::int64_t modulus() const { return std::int64_t{1} << n_; }
  std::int64_t a() const { return a_; }
  std::int64_t b() const { return b_; }
  std::int64_t c() const { return c_; }
  std::int64_t d() const { return d_; }

  /// Image in SL2(Z/2^m), m <= n.
  Mat2 reduce(unsigned m) const {
    if (m > n_) throw std::out_of_range("cannot reduce to a finer modulus");
    return {m, a_, b_, c_, d_};
  }

  bool congruent_to_identity(unsigned level) const {
    const std::int64_t q = std::int64_t{1} << level;
    auto m = [q](std::int64_t v) { return ((v % q) + q) % q; };
    return m(a_ - 1) == 0 && m(b_) == 0 && m(c_) == 0 && m(d_ - 1) == 0;
  }

  Mat2 operator-() const { return {n_, -a_, -b_, -c_, -d_}; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    if (x.n_ != y.n_) throw std::invalid_argument("Mat2 moduli differ");
    return {x.n_, x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_,
            x.c_ * y.a_ + x.d_ * y.c_, x.c_ * y.b_ + x.d_ * y.d_};
  }

  Mat2 inverse() const { return {n_, d_, -b_, -c_, a_}; }

  friend bool operator==(const Mat2&, const Mat2&) = default;
  friend auto operator<=>(const Mat2&, const Mat2&) = default;

  std::string to_string() const {
    std::ostringstream os;
    os << "[[" << a_ << "," << b_ << "],[" << c_ << "," << d_ << "]] mod " << modulus();
    return os.str();
  }

 private:
  std::int64_t red(std::int64_t v) const {
    const std::int64_t q = std::int64_t{1} << n_;
    return ((v % q) + q) % q;
  }

  unsigned n_;
  std::int64_t a_, b_, c_, d_;
};

/// A matrix group together with its Cayley table; elements sorted.
struct MatrixGroup {
  std::vector<Mat2> elements;
  FiniteGroup group;

  int index_of(const Mat2& m) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), m);
    if (it == elements.end() || !(*it == m)) return -1;
    return static_cast<int>(it - elements.begin());
  }
};

inline MatrixGroup make_matrix_group(std::vector<Mat2> elems, unsigned exponent) {
  std::sort(elems.begin(), elems.end());
  MatrixGroup g{std::move(elems), {}};
  g.group = group_from_elements(g.elements, Mat2::identity(exponent),
                                [](const Mat2& x, const Mat2& y) { return x * y; });
  return g;
}

/// All matrices of SL2(Z/2^exponent) satisfying `keep`.
template <class Pred>
std::vector<Mat2> enumerate_sl2(unsigned exponent, Pred keep) {
  if (exponent < 1 || exponent > Mat2::max_exponent)
    throw std::out_of_range("modulus exponent out of range");
  const std::int64_t q = std::int64_t{1} << exponent;
  std::vector<Mat2> out;
  for (std::int64_t a = 0; a < q; ++a)
    for (std::int64_t b = 0; b < q; ++b)
      for (std::int64_t c = 0; c < q; ++c)
        for (std::int64_t d = 0; d < q; ++d)
          if ((((a * d - b * c) % q) + q) % q == 1 % q) {
            Mat2 m(exponent, a, b, c, d);
            if (keep(m)) out.push_back(m);
          }
  return out;
}

/// Image of Gamma(2^level) in SL2(Z/2^exponent).
inline MatrixGroup congruence_image(unsigned exponent, unsigned level) {
  if (level > exponent) throw std::out_of_range("level exceeds modulus exponent");
  return make_matrix_group(
      enumerate_sl2(exponent, [&](const Mat2& m) { return m.congruent_to_identity(level); }),
      exponent);
}

inline bool in_gamma2_prime(const Mat2& m) {
  return m.congruent_to_identity(1) && m.a() % 4 == 1 && m.d() % 4 == 1;
}

/// Image of Gamma(2)' (Gamma(2) with diagonal = 1 mod 4) in SL2(Z/2^exponent).
inline MatrixGroup gamma2_prime(unsigned exponent) {
  if (exponent < 3) throw std::out_of_range("Gamma(2)' image needs modulus >= 8");
  return make_matrix_group(enumerate_sl2(exponent, in_gamma2_prime), exponent);
}

inline Mat2 sigma_tilde(unsigned exponent) { return {exponent, 1, -2, 0, 1}; }
inline Mat2 tau_tilde(unsigned exponent) { return {exponent, 1, 0, 2, 1}; }

// Words over {s, s^-1, t, t^-1} = letters {0, 1, 2, 3}; [a,b] = a^-1 b^-1 a b.
struct Relator {
  std::string name;
  std::vector<int> word;
};

inline const std::vector<Relator>& presentation_relators() {
  enum : int { s = 0, S = 1, t = 2, T = 3 };
  static const std::vector<Relator> rels = {
      {"s^4", {s, s, s, s}},
      {"t^4", {t, t, t, t}},
      {"[s^2,t]", {S, S, T, s, s, t}},
      {"[s,t^2]", {S, T, T, s, t, t}},
      {"[s,t]^2", {S, T, s, t, S, T, s, t}},
      {"[[s,t],s]", {T, S, t, s, S, S, T, s, t, s}},
      {"[[s,t],t]", {T, S, t, s, T, S, T, s, t, t}},
  };
  return rels;
}

inline Mat2 evaluate_word(const std::vector<int>& word, const Mat2& s, const Mat2& t) {
  Mat2 x = Mat2::identity(s.exponent());
  for (int letter : word) {
    const Mat2& g = letter < 2 ? s : t;
    x = x * (letter % 2 ? g.inverse() : g);
  }
  return x;
}

/// Coset table over the trivial subgroup (HLT strategy with coincidence
/// processing). Columns are letters 0..2k-1, letter^1 is the inverse letter.
class ToddCoxeter {
 public:
  ToddCoxeter(int generators, std::vector<std::vector<int>> relators, std::size_t max_cosets)
      : ncols_(2 * generators), rels_(std::move(relators)), max_(max_cosets) {}

  /// Number of cosets, or 0 if the coset limit was hit.
  std::size_t run() {
    new_coset();
    for (std::size_t c = 0; c < table_.size(); ++c) {
      if (rep_[c] != static_cast<int>(c)) continue;
      for (const auto& r : rels_) {
        if (!scan_and_fill(static_cast<int>(c), r)) return 0;
        if (rep_[c] != static_cast<int>(c)) break;
      }
      if (rep_[c] != static_cast<int>(c)) continue;
      for (int x = 0; x < ncols_; ++x)
        if (table_[c][x] < 0 && !define(static_cast<int>(c), x)) return 0;
    }
    compact();
    return perms_.empty() ? 0 : perms_[0].size();
  }

  /// Action of each letter on the surviving cosets (coset 0 = subgroup).
  const std::vector<std::vector<int>>& permutations() const { return perms_; }
  std::size_t cosets_defined() const { return table_.size(); }

 private:
  int find(int k) {
    while (rep_[k] != k) {
      rep_[k] = rep_[rep_[k]];
      k = rep_[k];
    }
    return k;
  }

  bool new_coset() {
    if (table_.size() >= max_) return false;
    table_.emplace_back(ncols_, -1);
    rep_.push_back(static_cast<int>(table_.size() - 1));
    return true;
  }

  bool define(int c, int x) {
    if (!new_coset()) return false;
    const int n = static_cast<int>(table_.size() - 1);
    table_[c][x] = n;
    table_[n][x ^ 1] = c;
    return true;
  }

  void merge(int k, int l, std::vector<int>& queue) {
    const int a = find(k), b = find(l);
    if (a == b) return;
    const int lo = std::min(a, b), hi = std::max(a, b);
    rep_[hi] = lo;
    queue.push_back(hi);
  }

  void coincidence(int a, int b) {
    std::vector<int> queue;
    merge(a, b, queue);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const int g = queue[i];
      for (int x = 0; x < ncols_; ++x) {
        const int d = table_[g][x];
        if (d < 0) continue;
        if (table_[d][x ^ 1] == g) table_[d][x ^ 1] = -1;
        const int mu = find(g), nu = find(d);
        if (table_[mu][x] >= 0)
          merge(nu, table_[mu][x], queue);
        else if (table_[nu][x ^ 1] >= 0)
          merge(mu, table_[nu][x ^ 1], queue);
        else {
          table_[mu][x] = nu;
          table_[nu][x ^ 1] = mu;
        }
      }
    }
  }

  bool scan_and_fill(int c, const std::vector<int>& w) {
    int f = c, b = c;
    int i = 0, j = static_cast<int>(w.size()) - 1;
    for (;;) {
      while (i <= j && table_[f][w[i]] >= 0) f = table_[f][w[i++]];
      if (i > j) {
        if (f != b) coincidence(f, b);
        return true;
      }
      while (j >= i && table_[b][w[j] ^ 1] >= 0) b = table_[b][w[j--] ^ 1];
      if (j < i) {
        coincidence(f, b);
        return true;
      }
      if (i == j) {
        table_[f][w[i]] = b;
        table_[b][w[i] ^ 1] = f;
        return true;
      }
      if (!define(f, w[i])) return false;
    }
  }

  void compact() {
    std::vector<int> alive, index(table_.size(), -1);
    for (std::size_t c = 0; c < table_.size(); ++c)
      if (rep_[c] == static_cast<int>(c)) {
        index[c] = static_cast<int>(alive.size());
        alive.push_back(static_cast<int>(c));
      }
    perms_.assign(ncols_, std::vector<int>(alive.size()));
    for (std::size_t i = 0; i < alive.size(); ++i)
      for (int x = 0; x < ncols_; ++x) {
        const int target = table_[alive[i]][x];
        if (target < 0) {
          perms_.clear();
          return;
        }
        perms_[x][i] = index[find(target)];
      }
  }

  int ncols_;
  std::vector<std::vector<int>> rels_;
  std::size_t max_;
  std::vector<std::vector<int>> table_;
  std::vector<int> rep_;
  std::vector<std::vector<int>> perms_;
};

struct PresentedGroup {
  std::size_t order = 0;  // 0: enumeration did not close within the cap
  std::size_t cosets_defined = 0;
  FiniteGroup group;  // regular representation; generators {s, t}
};

/// Enumerates <s, t | relators> (cap in cosets).
inline PresentedGroup enumerate_presented_group(std::size_t cap = 10000) {
  std::vector<std::vector<int>> words;
  for (const auto& r : presentation_relators()) words.push_back(r.word);
  ToddCoxeter tc(2, words, cap);
  PresentedGroup out;
  out.order = tc.run();
  out.cosets_defined = tc.cosets_defined();
  if (out.order == 0) return out;
  using Perm = std::vector<int>;
  const auto& p = tc.permutations();
  Perm id(out.order);
  std::iota(id.begin(), id.end(), 0);
  // (g * x)(c) = g(x(c)); the opposite group is isomorphic, so orders and
  // commutator data do not depend on this choice.
  auto compose = [](const Perm& g, const Perm& x) {
    Perm r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = g[x[i]];
    return r;
  };
  out.group = generate_group(id, std::vector<Perm>{p[0], p[2]}, compose, cap);
  return out;
}

struct RelationVerdict {
  std::string name;
  bool holds = false;
};

struct PresentationReport {
  std::vector<RelationVerdict> relations;
  bool generates = false;          // <s, t> is the whole of G
  std::size_t presented_order = 0;
  std::size_t commutator_subgroup_order = 0;
  bool commutator_element_order_two = false;
  bool abelianization_z4_z4 = false;

  bool all_pass() const {
    for (const auto& r : relations)
      if (!r.holds) return false;
    return generates && presented_order == 32 && commutator_subgroup_order == 2 &&
           commutator_element_order_two && abelianization_z4_z4;
  }
};

/// Abelian group given as cosets of `sub` in g: is it Z/4 x Z/4?
inline bool quotient_is_z4_z4(const FiniteGroup& g, const std::vector<int>& sub) {
  if (g.size() != 16 * sub.size()) return false;
  std::vector<char> in_sub(g.size(), 0);
  for (int x : sub) in_sub[x] = 1;
  // Order 16, exponent 4 and exactly 4 solutions of x^2 = 1 pin Z/4 x Z/4.
  std::size_t involutions_or_one = 0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    const int xi = static_cast<int>(x);
    if (!in_sub[g.pow(xi, 4)]) return false;
    if (in_sub[g.pow(xi, 2)]) ++involutions_or_one;
  }
  return involutions_or_one / sub.size() == 4;
}

inline PresentationReport check_presentation(const MatrixGroup& G, const Mat2& s, const Mat2& t) {
  PresentationReport rep;
  for (const auto& r : presentation_relators())
    rep.relations.push_back(
        {r.name, evaluate_word(r.word, s, t) == Mat2::identity(s.exponent())});
  const int si = G.index_of(s), ti = G.index_of(t);
  rep.generates = si >= 0 && ti >= 0 && G.group.subgroup({si, ti}).size() == G.elements.size();
  const PresentedGroup pg = enumerate_presented_group();
  rep.presented_order = pg.order;
  if (pg.order > 0) {
    const auto comm = pg.group.commutator_subgroup();
    rep.commutator_subgroup_order = comm.size();
    rep.commutator_element_order_two = comm.size() == 2 && pg.group.order(comm[1]) == 2;
    rep.abelianization_z4_z4 = quotient_is_z4_z4(pg.group, comm);
  }
  return rep;
}

struct GroupStructureReport {
  std::size_t gamma2_order = 0;        // |Gamma(2)/Gamma(8)|
  std::size_t gamma2_prime_order = 0;  // |Gamma(2)'/Gamma(8)|
  bool minus_one_outside_prime = false;
  bool direct_product = false;  // every element is uniquely +-h, h in Gamma(2)'
};

inline GroupStructureReport check_group_structure() {
  const MatrixGroup g2 = congruence_image(3, 1);
  const MatrixGroup g2p = gamma2_prime(3);
  GroupStructureReport rep;
  rep.gamma2_order = g2.elements.size();
  rep.gamma2_prime_order = g2p.elements.size();
  const Mat2 minus_one = -Mat2::identity(3);
  rep.minus_one_outside_prime = g2p.index_of(minus_one) < 0;
  bool ok = g2.index_of(minus_one) >= 0;
  for (const Mat2& m : g2.elements) {
    const bool plus = g2p.index_of(m) >= 0, minus = g2p.index_of(-m) >= 0;
    ok = ok && (plus != minus);
  }
  for (const Mat2& m : g2p.elements) ok = ok && g2.index_of(m) >= 0;
  rep.direct_product = ok && rep.gamma2_order == 2 * rep.gamma2_prime_order;
  return rep;
}

struct LayerReport {
  unsigned level = 0;  // Gamma(2^level)/Gamma(2^(level+1))
  std::size_t order = 0;
  bool elementary_abelian = false;
};

/// Gamma(2^n)/Gamma(2^(n+1)) realized as the image of Gamma(2^n) in
/// SL2(Z/2^(n+1)).
inline LayerReport check_layer(unsigned level) {
  const MatrixGroup g = congruence_image(level + 1, level);
  LayerReport rep{level, g.elements.size(), false};
  std::vector<int> all(g.elements.size());
  std::iota(all.begin(), all.end(), 0);
  bool ok = g.group.is_abelian(all);
  for (int x : all) ok = ok && (x == g.group.identity || g.group.order(x) == 2);
  rep.elementary_abelian = ok;
  return rep;
}

struct UniqueQuotientReport {
  std::size_t h_order = 0;  // |image of Gamma(2)' mod 16|
  bool generated_by_sigma_tau = false;
  std::size_t normal_closure_order = 0;
  std::size_t kernel_order = 0;
  bool closure_equals_kernel = false;
  bool center_elementary_abelian = false;        // center of Gamma(2)/Gamma(8)
  bool prime_center_elementary_abelian = false;  // center of Gamma(2)'/Gamma(8)
  bool gamma2_not_two_generated = false;

  bool all_pass() const {
    return generated_by_sigma_tau && closure_equals_kernel && center_elementary_abelian &&
           prime_center_elementary_abelian && gamma2_not_two_generated;
  }
};

inline bool center_is_elementary_abelian(const FiniteGroup& g) {
  const auto z = g.center();
  for (int x : z)
    if (g.mul(x, x) != g.identity) return false;
  return true;
}

inline UniqueQuotientReport unique_quotient_check() {
  UniqueQuotientReport rep;
  const MatrixGroup h = gamma2_prime(4);
  rep.h_order = h.elements.size();
  const Mat2 s = sigma_tilde(4), t = tau_tilde(4);
  rep.generated_by_sigma_tau =
      h.group.subgroup({h.index_of(s), h.index_of(t)}).size() == h.elements.size();
  std::vector<int> relator_images;
  for (const auto& r : presentation_relators())
    relator_images.push_back(h.index_of(evaluate_word(r.word, s, t)));
  const auto closure = h.group.normal_closure(relator_images);
  std::vector<int> kernel;
  for (std::size_t i = 0; i < h.elements.size(); ++i)
    if (h.elements[i].congruent_to_identity(3)) kernel.push_back(static_cast<int>(i));
  rep.normal_closure_order = closure.size();
  rep.kernel_order = kernel.size();
  rep.closure_equals_kernel = closure == kernel;

  const MatrixGroup g2 = congruence_image(3, 1);
  rep.center_elementary_abelian = center_is_elementary_abelian(g2.group);
  rep.prime_center_elementary_abelian = center_is_elementary_abelian(gamma2_prime(3).group);
  bool two_generated = false;
  const int n = static_cast<int>(g2.elements.size());
  for (int a = 0; a < n && !two_generated; ++a)
    for (int b = a; b < n && !two_generated; ++b)
      two_generated = g2.group.subgroup({a, b}).size() == g2.elements.size();
  rep.gamma2_not_two_generated = !two_generated;
  return rep;
}

}  // namespace divfield
