#pragma once

// Generators of the 4- and 8-division fields of y^2 = (x - a1)(x - a2)(x - a3)
// (or of the Jacobian of y^2 = quartic) and the identities they satisfy.
//
// Indices i run over Z/3; in code they are 0-based, so A[i] is A_{i+1}.

#include "divfield/finite_group.hpp"
#include "divfield/tower.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace divfield {

struct InvalidCurve : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class CurveMode { degree3, degree4 };

inline std::string to_string(CurveMode m) { return m == CurveMode::degree3 ? "degree3" : "degree4"; }

inline CurveMode parse_mode(std::string_view s) {
  if (s == "degree3") return CurveMode::degree3;
  if (s == "degree4") return CurveMode::degree4;
  throw ParseError("unknown curve mode '" + std::string(s) + "'");
}

struct CurveInput {
  CurveMode mode = CurveMode::degree3;
  std::vector<Rational> roots;

  void validate() const {
    const std::size_t want = mode == CurveMode::degree3 ? 3 : 4;
    if (roots.size() != want)
      throw InvalidCurve(to_string(mode) + " needs " + std::to_string(want) + " roots, got " +
                         std::to_string(roots.size()));
    for (std::size_t i = 0; i < roots.size(); ++i)
      for (std::size_t j = i + 1; j < roots.size(); ++j)
        if (roots[i] == roots[j]) throw InvalidCurve("repeated root " + divfield::to_string(roots[i]));
  }
};

using Triple = std::array<Rational, 3>;

/// gamma_i = (a_{i+1} + a_{i+2})(a_i + a_4). Also checks
/// gamma_{i+1} - gamma_{i+2} = (a_i - a_4)(a_{i+1} - a_{i+2}).
inline Triple compute_gamma(const std::vector<Rational>& a) {
  if (a.size() != 4) throw InvalidCurve("gamma needs four roots");
  CurveInput{CurveMode::degree4, a}.validate();
  Triple g;
  for (int i = 0; i < 3; ++i) g[i] = (a[(i + 1) % 3] + a[(i + 2) % 3]) * (a[i] + a[3]);
  for (int i = 0; i < 3; ++i)
    if (g[(i + 1) % 3] - g[(i + 2) % 3] != (a[i] - a[3]) * (a[(i + 1) % 3] - a[(i + 2) % 3]))
      throw InvariantViolation("gamma difference identity failed");
  return g;
}

/// Roots of the cubic model the torsion computations run on: the input roots
/// for degree 3, the gamma_i for degree 4.
inline Triple working_cubic(const CurveInput& in) {
  in.validate();
  if (in.mode == CurveMode::degree3) return {in.roots[0], in.roots[1], in.roots[2]};
  Triple g = compute_gamma(in.roots);
  if (g[0] == g[1] || g[1] == g[2] || g[0] == g[2])
    throw InvalidCurve("degenerate quartic: repeated gamma");
  return g;
}

struct GeneratorSet {
  CurveInput input;
  Tower tower;
  Triple cubic;                 // working cubic roots
  std::optional<Triple> gamma;  // degree-4 only
  std::array<TowerElement, 3> alpha, A, B, Bp;
  TowerElement zeta4, zeta8;
  /// Generators whose radicand was already a square (no level added).
  std::vector<std::string> collapsed;

  /// Look-up by name: zeta4, zeta8, A1..A3, B1..B3, B1'..B3'.
  TowerElement element(std::string_view name) const {
    if (name == "zeta4") return zeta4;
    if (name == "zeta8") return zeta8;
    if (name.size() >= 2 && (name[0] == 'A' || name[0] == 'B') && name[1] >= '1' && name[1] <= '3') {
      const int i = name[1] - '1';
      if (name.size() == 2) return name[0] == 'A' ? A[i] : B[i];
      if (name.size() == 3 && name[0] == 'B' && name[2] == '\'') return Bp[i];
    }
    throw std::out_of_range("unknown generator '" + std::string(name) + "'");
  }

  static const std::vector<std::string>& generator_names() {
    static const std::vector<std::string> names = {"zeta4", "A1", "A2", "A3",
                                                   "zeta8", "B1", "B2", "B3"};
    return names;
  }

  /// Radicand of B_i: A_i (A_{i+1} + zeta4 A_{i+2}).
  TowerElement b_radicand(int i) const {
    return A[i] * (A[(i + 1) % 3] + zeta4 * A[(i + 2) % 3]);
  }
};

/// Adjoins, in order, zeta4, A1, A2, A3, zeta8, B1, B2, B3 to Q. Radicands
/// that are already squares add no level; B_i' = zeta4 A_i^2 / B_i.
inline GeneratorSet build_tower(const CurveInput& in) {
  GeneratorSet g;
  g.input = in;
  g.cubic = working_cubic(in);
  if (in.mode == CurveMode::degree4) g.gamma = g.cubic;
  Tower t;
  auto adjoin = [&](const TowerElement& d, const std::string& label) {
    Adjunction a = adjoin_sqrt(t, d, label);
    if (!a.extended) g.collapsed.push_back(label);
    t = a.tower;
    return a.root;
  };
  g.zeta4 = adjoin(TowerElement(t, Rational(-1)), "zeta4");
  for (int i = 0; i < 3; ++i)
    g.A[i] = adjoin(TowerElement(t, g.cubic[(i + 1) % 3] - g.cubic[(i + 2) % 3]),
                    "A" + std::to_string(i + 1));
  g.zeta8 = adjoin(g.zeta4, "zeta8");
  for (int i = 0; i < 3; ++i) g.B[i] = adjoin(g.b_radicand(i), "B" + std::to_string(i + 1));

  g.tower = t;
  g.zeta4 = g.zeta4.embed(t);
  g.zeta8 = g.zeta8.embed(t);
  for (int i = 0; i < 3; ++i) {
    g.alpha[i] = TowerElement(t, g.cubic[i]);
    g.A[i] = g.A[i].embed(t);
    g.B[i] = g.B[i].embed(t);
  }
  for (int i = 0; i < 3; ++i) g.Bp[i] = g.zeta4 * g.A[i].squared() / g.B[i];
  return g;
}

struct IdentityCheck {
  std::string name;
  int index = 0;  // 1..3, or 0 for checks not indexed by i
  bool pass = false;
  bool skipped = false;
  std::string note;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.skipped && !c.pass) return false;
    return true;
  }
  std::size_t count(bool skipped) const {
    std::size_t n = 0;
    for (const auto& c : checks) n += c.skipped == skipped;
    return n;
  }
};

/// Exact check of every stated identity among the generators.
inline IdentityReport verify_identities(const GeneratorSet& g) {
  IdentityReport rep;
  auto add = [&](std::string name, int i, bool ok) {
    rep.checks.push_back({std::move(name), i, ok, false, {}});
  };
  const Tower& t = g.tower;
  const auto one = TowerElement::one(t);
  const auto& z = g.zeta4;
  const auto& A = g.A;
  const auto& B = g.B;
  const auto& Bp = g.Bp;

  add("zeta4^2 = -1", 0, z.squared() == -one);
  add("zeta8^2 = zeta4", 0, g.zeta8.squared() == z);
  add("A1^2 + A2^2 + A3^2 = 0", 0,
      (A[0].squared() + A[1].squared() + A[2].squared()).is_zero());
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3, n = i + 1;
    add("A_i^2 = a_{i+1} - a_{i+2}", n, A[i].squared() == g.alpha[j] - g.alpha[k]);
    if (g.input.mode == CurveMode::degree4) {
      const auto& a = g.input.roots;
      add("A_i^2 = (a_i - a_4)(a_{i+1} - a_{i+2})", n,
          A[i].squared() == TowerElement(t, (a[i] - a[3]) * (a[j] - a[k])));
    }
    add("B_i^2 = A_i(A_{i+1} + zeta4 A_{i+2})", n, B[i].squared() == g.b_radicand(i));
    add("B_i'^2 = A_i(A_{i+1} - zeta4 A_{i+2})", n, Bp[i].squared() == A[i] * (A[j] - z * A[k]));
    add("B_i B_i' = zeta4 A_i^2", n, B[i] * Bp[i] == z * A[i].squared());
    add("A_i(A_{i+1} + zeta4 A_{i+2}) * A_i(A_{i+1} - zeta4 A_{i+2}) = -A_i^4", n,
        (A[i] * (A[j] + z * A[k])) * (A[i] * (A[j] - z * A[k])) == -A[i].squared().squared());
    for (int s : {+1, -1}) {
      const Rational sr(s);
      const std::string pm = s > 0 ? "+" : "-";
      const std::string mp = s > 0 ? "-" : "+";
      add("(B_i " + pm + " B_i')^2 = 2A_iA_{i+1} " + pm + " 2zeta4 A_i^2", n,
          (B[i] + sr * Bp[i]).squared() ==
              Rational(2) * A[i] * A[j] + Rational(2 * s) * z * A[i].squared());
      add("(B_i " + pm + " zeta4 B_i')^2 = 2zeta4 A_iA_{i+2} " + mp + " 2A_i^2", n,
          (B[i] + sr * z * Bp[i]).squared() ==
              Rational(2) * z * A[i] * A[k] - Rational(2 * s) * A[i].squared());
    }
    const auto denom = A[i] + z * A[j];
    const std::string name = "[(1-zeta4)^-1 (B_i - B_i') B_{i+2} / (A_i + zeta4 A_{i+1})]^2 = A_i A_{i+2}";
    if (denom.is_zero()) {
      rep.checks.push_back({name, n, false, true, "A_i + zeta4 A_{i+1} = 0"});
    } else {
      const auto root = (one - z).inverse() * (B[i] - Bp[i]) * B[k] / denom;
      add(name, n, root.squared() == A[i] * A[k]);
    }
  }
  return rep;
}

}  // namespace divfield
