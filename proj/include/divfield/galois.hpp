#pragma once

// Automorphisms of a multiquadratic tower, the maps sigma, tau, mu on the
// division-field generators, and their action on E[8].

#include "divfield/congruence.hpp"
#include "divfield/curve.hpp"
#include "divfield/finite_group.hpp"
#include "divfield/tower.hpp"
#include "divfield/towergen.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace divfield {

struct InconsistentAutomorphism : std::domain_error {
  using std::domain_error::domain_error;
};

/// Q-automorphism of a tower, fixed by the images of its level generators.
/// Carrying a table of monomial images makes `apply` a sparse linear map;
/// automorphisms produced by composition carry no table until asked.
class TowerAutomorphism {
 public:
  static TowerAutomorphism identity(const Tower& t) {
    std::vector<TowerElement> img;
    for (std::size_t k = 0; k < t.depth(); ++k) img.push_back(TowerElement::generator(t, k));
    return from_images(t, std::move(img));
  }

  /// Validates img[k]^2 = phi(d_k) level by level.
  static TowerAutomorphism from_images(const Tower& t, std::vector<TowerElement> img) {
    if (img.size() != t.depth()) throw StructuralError("one image per level required");
    TowerAutomorphism a(t);
    for (auto& v : img) v = v.embed(t);
    a.img_ = std::move(img);
    a.table_ = std::make_shared<Table>(build_table(t, a.img_, true));
    return a;
  }

  const Tower& tower() const { return t_; }
  const std::vector<TowerElement>& images() const { return img_; }
  bool has_table() const { return static_cast<bool>(table_); }

  TowerAutomorphism with_table() const {
    if (table_) return *this;
    TowerAutomorphism a = *this;
    a.table_ = std::make_shared<Table>(build_table(t_, img_, false));
    return a;
  }

  TowerElement apply(const TowerElement& x) const {
    if (!table_) return with_table().apply(x);
    const TowerElement v = x.embed(t_);
    Coeffs out = detail::zeros(t_.dimension());
    for (std::size_t m = 0; m < v.coeffs().size(); ++m) {
      const Rational& c = v.coeffs()[m];
      if (sgn(c) == 0) continue;
      for (const auto& [i, r] : (*table_)[m]) out[i] += c * r;
    }
    return {t_, std::move(out)};
  }

  /// (*this) o psi
  TowerAutomorphism after(const TowerAutomorphism& psi) const {
    TowerAutomorphism a(t_);
    for (const auto& v : psi.img_) a.img_.push_back(apply(v));
    return a;
  }

  friend bool operator==(const TowerAutomorphism& a, const TowerAutomorphism& b) {
    return a.t_ == b.t_ && a.img_ == b.img_;
  }

 private:
  using Sparse = std::vector<std::pair<std::size_t, Rational>>;
  using Table = std::vector<Sparse>;

  explicit TowerAutomorphism(Tower t) : t_(std::move(t)) {}

  static Sparse sparse(const TowerElement& x) {
    Sparse s;
    for (std::size_t i = 0; i < x.coeffs().size(); ++i)
      if (sgn(x.coeffs()[i]) != 0) s.emplace_back(i, x.coeffs()[i]);
    return s;
  }

  static TowerElement combine(const Tower& t, const Table& table, const Coeffs& c) {
    Coeffs out = detail::zeros(t.dimension());
    for (std::size_t m = 0; m < c.size(); ++m) {
      if (sgn(c[m]) == 0) continue;
      for (const auto& [i, r] : table[m]) out[i] += c[m] * r;
    }
    return {t, std::move(out)};
  }

  static Table build_table(const Tower& t, const std::vector<TowerElement>& img, bool check) {
    std::vector<TowerElement> mono{TowerElement::one(t)};
    Table table{sparse(mono[0])};
    for (std::size_t k = 0; k < t.depth(); ++k) {
      if (check) {
        const TowerElement d = combine(t, table, t.radicand_coeffs(k));
        if (!(img[k].squared() == d))
          throw InconsistentAutomorphism("image of " + t.label(k) +
                                         " does not square to the image of its radicand");
      }
      const std::size_t half = mono.size();
      for (std::size_t m = 0; m < half; ++m) {
        mono.push_back(mono[m] * img[k]);
        table.push_back(sparse(mono.back()));
      }
    }
    return table;
  }

  Tower t_;
  std::vector<TowerElement> img_;
  std::shared_ptr<const Table> table_;
};

using GeneratorImages = std::map<std::string, TowerElement>;

/// Builds the automorphism with the given images of named generators. Level
/// generators without an entry must be zeta4 or zeta8, which default to
/// fixed. Entries for generators that are not levels (their radicand was
/// already a square) are checked against the induced map.
inline TowerAutomorphism make_automorphism(const GeneratorSet& g, const GeneratorImages& images) {
  const Tower& t = g.tower;
  std::vector<TowerElement> img;
  for (std::size_t k = 0; k < t.depth(); ++k) {
    const std::string& label = t.label(k);
    auto it = images.find(label);
    if (it != images.end()) {
      img.push_back(it->second);
    } else if (label == "zeta4" || label == "zeta8") {
      img.push_back(TowerElement::generator(t, k));
    } else {
      throw StructuralError("no image given for generator " + label);
    }
  }
  TowerAutomorphism a = TowerAutomorphism::from_images(t, std::move(img));
  auto expect = [&](const std::string& name, const TowerElement& want) {
    if (!(a.apply(g.element(name)) == want))
      throw InconsistentAutomorphism("image of " + name + " (= " + to_string(g.element(name)) +
                                     ") is inconsistent with the images of the tower levels");
  };
  for (const auto& [name, want] : images)
    if (!t.find(name)) expect(name, want);
  for (const char* z : {"zeta4", "zeta8"})
    if (!images.count(z) && !t.find(z)) expect(z, g.element(z));
  return a;
}

/// sigma: A3 -> -A3, B1 -> B1', B2 -> zeta4 B2', B3 -> zeta4 B3.
inline GeneratorImages sigma_images(const GeneratorSet& g) {
  const auto& z = g.zeta4;
  return {{"A1", g.A[0]},           {"A2", g.A[1]},      {"A3", -g.A[2]},
          {"B1", g.Bp[0]},          {"B2", z * g.Bp[1]}, {"B3", z * g.B[2]},
          {"zeta4", z},             {"zeta8", g.zeta8}};
}

/// tau: A1 -> -A1, B1 -> zeta4 B1, B2 -> B2', B3 -> zeta4 B3'.
inline GeneratorImages tau_images(const GeneratorSet& g) {
  const auto& z = g.zeta4;
  return {{"A1", -g.A[0]},      {"A2", g.A[1]},  {"A3", g.A[2]},
          {"B1", z * g.B[0]},   {"B2", g.Bp[1]}, {"B3", z * g.Bp[2]},
          {"zeta4", z},         {"zeta8", g.zeta8}};
}

/// mu: every A_i and B_i changes sign; zeta8 fixed.
inline GeneratorImages mu_images(const GeneratorSet& g) {
  GeneratorImages m{{"zeta4", g.zeta4}, {"zeta8", g.zeta8}};
  for (int i = 0; i < 3; ++i) {
    m.emplace("A" + std::to_string(i + 1), -g.A[i]);
    m.emplace("B" + std::to_string(i + 1), -g.B[i]);
  }
  return m;
}

inline Point act_on_point(const TowerAutomorphism& phi, const Point& p) {
  if (p.infinity) return p;
  return Point::affine(phi.apply(p.x), phi.apply(p.y));
}

/// Every automorphism of the tower over Q, found level by level: the image
/// of level k is either square root of the image of its radicand.
inline std::size_t for_each_automorphism(const Tower& t,
                                         const std::function<void(const TowerAutomorphism&)>& f) {
  std::size_t count = 0;
  std::vector<TowerElement> img;
  std::function<void()> rec = [&] {
    const std::size_t k = img.size();
    if (k == t.depth()) {
      ++count;
      f(TowerAutomorphism::from_images(t, img));
      return;
    }
    TowerElement d = TowerElement::zero(t);
    {
      // phi(d_k) with phi given on the prefix by `img`
      std::vector<TowerElement> mono{TowerElement::one(t)};
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t half = mono.size();
        for (std::size_t m = 0; m < half; ++m) mono.push_back(mono[m] * img[j]);
      }
      const Coeffs& rc = t.radicand_coeffs(k);
      for (std::size_t m = 0; m < rc.size(); ++m)
        if (sgn(rc[m]) != 0) d = d + mono[m] * rc[m];
    }
    auto r = sqrt_in_tower(d);
    if (!r) return;
    for (const auto& root : {*r, -*r}) {
      img.push_back(root);
      rec();
      img.pop_back();
    }
  };
  rec();
  return count;
}

/// Basis of E[8] and coordinates of every point in it.
struct TorsionBasis {
  int q1 = -1, q2 = -1;            // indices into Torsion::points
  std::vector<std::array<int, 2>> label;  // point index -> (a, b), P = aQ1 + bQ2
  std::vector<int> index;                 // 8a + b -> point index

  int at(int a, int b) const { return index[static_cast<std::size_t>(((a % 8 + 8) % 8) * 8 + (b % 8 + 8) % 8)]; }
};

/// Q1, Q2: the lexicographically first pair of order-8 points whose
/// multiples 4Q1, 4Q2 are distinct.
inline TorsionBasis torsion_basis(const Curve& c, const Torsion& tor) {
  TorsionBasis b;
  const std::size_t n = tor.points.size();
  std::vector<Point> four(n);
  for (std::size_t i = 0; i < n; ++i)
    if (tor.orders[i] == 8) four[i] = c.mul(4, tor.points[i]);
  for (std::size_t i = 0; i < n && b.q1 < 0; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (tor.orders[i] == 8 && tor.orders[j] == 8 && !(four[i] == four[j])) {
        b.q1 = static_cast<int>(i);
        b.q2 = static_cast<int>(j);
        break;
      }
  if (b.q1 < 0) throw InvariantViolation("no basis of E[8] found");
  b.label.assign(n, {-1, -1});
  b.index.assign(64, -1);
  const Point& Q1 = tor.points[static_cast<std::size_t>(b.q1)];
  const Point& Q2 = tor.points[static_cast<std::size_t>(b.q2)];
  Point row = Point::at_infinity();
  for (int a = 0; a < 8; ++a, row = c.add(row, Q1)) {
    Point p = row;
    for (int bb = 0; bb < 8; ++bb, p = c.add(p, Q2)) {
      const int idx = tor.index_of(p);
      if (idx < 0 || b.label[static_cast<std::size_t>(idx)][0] >= 0)
        throw InvariantViolation("basis does not label E[8] bijectively");
      b.label[static_cast<std::size_t>(idx)] = {a, bb};
      b.index[static_cast<std::size_t>(a * 8 + bb)] = idx;
    }
  }
  return b;
}

/// Action of an automorphism on E[8]: the permutation of point indices and
/// the matrix (a b; c d) mod 8 with phi(Q1) = aQ1 + cQ2, phi(Q2) = bQ1 + dQ2.
struct TorsionAction {
  std::vector<int> perm;
  std::array<int, 4> matrix{};
  bool linear = false;  // perm agrees with the matrix on every label

  int det() const { return ((matrix[0] * matrix[3] - matrix[1] * matrix[2]) % 8 + 8) % 8; }
  bool is_minus_one() const { return matrix == std::array<int, 4>{7, 0, 0, 7} && linear; }
  std::optional<Mat2> as_mat2() const {
    if (det() != 1) return std::nullopt;
    return Mat2(3, matrix[0], matrix[1], matrix[2], matrix[3]);
  }
};

inline TorsionAction torsion_action_from_perm(const TorsionBasis& b, std::vector<int> perm) {
  TorsionAction act;
  act.perm = std::move(perm);
  const auto l1 = b.label[static_cast<std::size_t>(act.perm[static_cast<std::size_t>(b.q1)])];
  const auto l2 = b.label[static_cast<std::size_t>(act.perm[static_cast<std::size_t>(b.q2)])];
  act.matrix = {l1[0], l2[0], l1[1], l2[1]};
  act.linear = true;
  for (std::size_t i = 0; i < act.perm.size() && act.linear; ++i) {
    const auto [u, v] = b.label[i];
    const int want = b.at(act.matrix[0] * u + act.matrix[1] * v, act.matrix[2] * u + act.matrix[3] * v);
    act.linear = act.perm[i] == want;
  }
  return act;
}

/// Throws InvariantViolation if some image leaves E[8].
inline TorsionAction torsion_action(const TowerAutomorphism& phi, const Torsion& tor,
                                    const TorsionBasis& b) {
  std::vector<int> perm;
  for (const auto& p : tor.points) {
    const int idx = tor.index_of(act_on_point(phi, p));
    if (idx < 0) throw InvariantViolation("automorphism moves a point out of E[8]");
    perm.push_back(idx);
  }
  return torsion_action_from_perm(b, std::move(perm));
}

struct MinusOneReport {
  bool literal_mu_defined = false;
  std::string literal_mu_error;
  bool literal_mu_negates = false;  // mu(Q) = -Q for all Q in E[8]
  bool enumerated = false;
  std::size_t automorphisms = 0;
  std::size_t acting_as_minus_one = 0;
  bool minus_one_elements_flip_generators = true;  // vacuous when none

  /// The literal map when it is a field automorphism; otherwise the
  /// conditional statement over every automorphism acting as -1.
  bool pass() const {
    if (literal_mu_defined) return literal_mu_negates;
    return enumerated && minus_one_elements_flip_generators;
  }
};

inline bool negates_all(const Curve& c, const TowerAutomorphism& phi, const Torsion& tor) {
  for (const auto& p : tor.points)
    if (!(act_on_point(phi, p) == c.neg(p))) return false;
  return true;
}

/// Checks the sign-flip description of the scalar -1. Where mu is not a
/// field automorphism, all automorphisms are enumerated (only feasible up to
/// `max_enumeration_dimension`).
inline MinusOneReport check_minus_one_action(const GeneratorSet& g, const Curve& c, const Torsion& tor,
                                       std::size_t max_enumeration_dimension = 128) {
  MinusOneReport rep;
  try {
    const auto mu = make_automorphism(g, mu_images(g));
    rep.literal_mu_defined = true;
    rep.literal_mu_negates = negates_all(c, mu, tor);
    return rep;
  } catch (const InconsistentAutomorphism& e) {
    rep.literal_mu_error = e.what();
  }
  if (g.tower.dimension() > max_enumeration_dimension) return rep;
  rep.enumerated = true;
  const TorsionBasis basis = torsion_basis(c, tor);
  rep.automorphisms = for_each_automorphism(g.tower, [&](const TowerAutomorphism& phi) {
    // cheap filter on the basis before the full check
    for (int q : {basis.q1, basis.q2}) {
      const Point& p = tor.points[static_cast<std::size_t>(q)];
      if (!(act_on_point(phi, p) == c.neg(p))) return;
    }
    if (!negates_all(c, phi, tor)) return;
    ++rep.acting_as_minus_one;
    bool ok = phi.apply(g.zeta8) == g.zeta8;
    for (int i = 0; i < 3; ++i)
      ok = ok && phi.apply(g.A[i]) == -g.A[i] && phi.apply(g.B[i]) == -g.B[i];
    rep.minus_one_elements_flip_generators = rep.minus_one_elements_flip_generators && ok;
  });
  return rep;
}

/// <sigma, tau, mu> acting on the tower, with everything needed to compare it
/// to Gamma(2)/Gamma(8).
struct GaloisGroup {
  std::vector<TowerAutomorphism> generators;  // sigma, tau, mu (with tables)
  FiniteGroup group;
  std::vector<TowerAutomorphism> elements;

  TowerElement apply(int element, const TowerElement& x) const {
    TowerElement v = x;
    const auto& w = group.words[static_cast<std::size_t>(element)];
    for (auto it = w.rbegin(); it != w.rend(); ++it) v = generators[static_cast<std::size_t>(*it)].apply(v);
    return v;
  }
};

inline GaloisGroup generate_galois_group(std::vector<TowerAutomorphism> gens, std::size_t cap = 128) {
  GaloisGroup G;
  for (auto& a : gens) G.generators.push_back(a.with_table());
  const auto& t = G.generators.front().tower();
  auto ident = TowerAutomorphism::identity(t);
  G.group = generate_group(
      ident, G.generators, [](const TowerAutomorphism& a, const TowerAutomorphism& b) { return a.after(b); },
      cap, &G.elements);
  return G;
}

struct SignPattern {
  std::string element;
  std::array<int, 3> b_signs{};  // +1 / -1 / 0 (neither)
  bool fixes_a_and_zeta8 = false;
  std::array<int, 3> expected{};
  bool ok() const { return fixes_a_and_zeta8 && b_signs == expected; }
};

struct GaloisReport {
  bool constructed = false;
  std::string error;
  std::size_t order_sigma_tau = 0;
  std::size_t order_sigma_tau_mu = 0;
  std::vector<RelationVerdict> relations;
  std::vector<SignPattern> sign_patterns;
  bool mu_central_involution = false;
  bool mu_outside_sigma_tau = false;
  IsomorphismResult isomorphism;
  std::uint64_t table_hash = 0;
  std::optional<bool> transpose_swap;  // sigma -> tau~, tau -> sigma~
  bool certificates_checked = false;
  bool certificates_in_gamma2 = false;  // every matrix is I mod 2 with det 1
  bool certificates_faithful = false;   // distinct elements act differently on E[8]
  bool certificate_homomorphism = false;

  bool all_pass() const {
    bool ok = constructed && order_sigma_tau == 32 && order_sigma_tau_mu == 64 &&
              mu_central_involution && mu_outside_sigma_tau && isomorphism.ok;
    for (const auto& r : relations) ok = ok && r.holds;
    for (const auto& s : sign_patterns) ok = ok && s.ok();
    if (certificates_checked)
      ok = ok && certificates_in_gamma2 && certificates_faithful && certificate_homomorphism;
    return ok;
  }
};

/// Builds sigma, tau, mu, generates the group and compares it with
/// Gamma(2)/Gamma(8). With torsion data the action on E[8] is certified too.
inline GaloisReport check_galois_group(const GeneratorSet& g, const Curve* curve = nullptr,
                                       const Torsion* tor = nullptr) {
  GaloisReport rep;
  std::optional<TowerAutomorphism> sigma, tau, mu;
  try {
    sigma = make_automorphism(g, sigma_images(g));
    tau = make_automorphism(g, tau_images(g));
    mu = make_automorphism(g, mu_images(g));
  } catch (const std::exception& e) {
    rep.error = e.what();
    return rep;
  }
  rep.constructed = true;

  const GaloisGroup st = generate_galois_group({*sigma, *tau});
  rep.order_sigma_tau = st.group.size();
  const auto& st_gens = st.group.generators;
  for (const auto& r : presentation_relators())
    rep.relations.push_back({r.name, st.group.evaluate(r.word, st_gens) == st.group.identity});

  const GaloisGroup G = generate_galois_group({*sigma, *tau, *mu});
  rep.order_sigma_tau_mu = G.group.size();
  rep.table_hash = G.group.table_hash();
  const int s = G.group.generators[0], t = G.group.generators[1], m = G.group.generators[2];

  auto pattern = [&](std::string name, int e, std::array<int, 3> expected) {
    SignPattern sp{std::move(name), {}, true, expected};
    for (int i = 0; i < 3; ++i) {
      const auto img = G.apply(e, g.B[i]);
      sp.b_signs[i] = img == g.B[i] ? 1 : img == -g.B[i] ? -1 : 0;
      sp.fixes_a_and_zeta8 = sp.fixes_a_and_zeta8 && G.apply(e, g.A[i]) == g.A[i];
    }
    sp.fixes_a_and_zeta8 = sp.fixes_a_and_zeta8 && G.apply(e, g.zeta8) == g.zeta8;
    rep.sign_patterns.push_back(std::move(sp));
  };
  pattern("sigma^2", G.group.mul(s, s), {1, 1, -1});
  pattern("tau^2", G.group.mul(t, t), {-1, 1, 1});
  pattern("[sigma,tau]", G.group.commutator(s, t), {-1, -1, -1});

  const auto centre = G.group.center();
  rep.mu_central_involution = G.group.order(m) == 2 && std::find(centre.begin(), centre.end(), m) != centre.end();
  rep.mu_outside_sigma_tau = true;
  {
    const auto sub = G.group.subgroup({s, t});
    rep.mu_outside_sigma_tau = !std::binary_search(sub.begin(), sub.end(), m);
  }

  const MatrixGroup H = congruence_image(3, 1);
  const Mat2 minus_one = -Mat2::identity(3);
  rep.isomorphism = match_isomorphism(
      G.group, H.group, {H.index_of(sigma_tilde(3)), H.index_of(tau_tilde(3)), H.index_of(minus_one)});
  if (G.group.size() == H.group.size())
    rep.transpose_swap =
        match_isomorphism(G.group, H.group,
                          {H.index_of(tau_tilde(3)), H.index_of(sigma_tilde(3)), H.index_of(minus_one)})
            .ok;

  if (curve && tor) {
    rep.certificates_checked = true;
    const TorsionBasis basis = torsion_basis(*curve, *tor);
    std::vector<TorsionAction> gen_act;
    for (const auto& a : G.generators) gen_act.push_back(torsion_action(a, *tor, basis));
    std::vector<std::array<int, 4>> mats;
    rep.certificates_in_gamma2 = true;
    for (std::size_t e = 0; e < G.group.size(); ++e) {
      std::vector<int> perm(tor->points.size());
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
      const auto& w = G.group.words[e];
      for (auto it = w.rbegin(); it != w.rend(); ++it)
        for (auto& v : perm) v = gen_act[static_cast<std::size_t>(*it)].perm[static_cast<std::size_t>(v)];
      const auto act = torsion_action_from_perm(basis, std::move(perm));
      const auto mat = act.as_mat2();
      rep.certificates_in_gamma2 = rep.certificates_in_gamma2 && act.linear && mat && mat->congruent_to_identity(1);
      mats.push_back(act.matrix);
    }
    auto sorted = mats;
    std::sort(sorted.begin(), sorted.end());
    rep.certificates_faithful = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    rep.certificate_homomorphism = rep.certificates_in_gamma2;
    auto mul8 = [](const std::array<int, 4>& x, const std::array<int, 4>& y) {
      return std::array<int, 4>{(x[0] * y[0] + x[1] * y[2]) % 8, (x[0] * y[1] + x[1] * y[3]) % 8,
                                (x[2] * y[0] + x[3] * y[2]) % 8, (x[2] * y[1] + x[3] * y[3]) % 8};
    };
    for (std::size_t a = 0; a < G.group.size() && rep.certificate_homomorphism; ++a)
      for (std::size_t b = 0; b < G.group.size(); ++b)
        if (mats[static_cast<std::size_t>(G.group.mul(static_cast<int>(a), static_cast<int>(b)))] !=
            mul8(mats[a], mats[b])) {
          rep.certificate_homomorphism = false;
          break;
        }
  }
  return rep;
}

/// First curve y^2 = x(x - a)(x - b), 0 < a < b <= max_b, ordered by b then
/// a, whose tower has all eight levels and on which sigma, tau, mu are
/// automorphisms.
inline std::optional<Triple> first_nondegenerate_curve(int max_b = 20) {
  for (int b = 2; b <= max_b; ++b)
    for (int a = 1; a < b; ++a) {
      const CurveInput in{CurveMode::degree3, {Rational(0), Rational(a), Rational(b)}};
      const auto g = build_tower(in);
      if (g.tower.dimension() != 256) continue;
      try {
        (void)make_automorphism(g, sigma_images(g));
        (void)make_automorphism(g, tau_images(g));
        (void)make_automorphism(g, mu_images(g));
      } catch (const InconsistentAutomorphism&) {
        continue;
      }
      return Triple{in.roots[0], in.roots[1], in.roots[2]};
    }
  return std::nullopt;
}

}  // namespace divfield
