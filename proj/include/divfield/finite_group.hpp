#pragma once

// Small finite groups as Cayley tables, plus the generic closure used for
// both matrix groups and groups of tower automorphisms.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace divfield {

struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Elements are 0..size()-1. When the group was generated from generators,
/// `words[i]` spells element i as g[w0] * g[w1] * ... (empty for identity).
struct FiniteGroup {
  std::vector<std::vector<int>> table;
  int identity = 0;
  std::vector<int> inverse;
  std::vector<int> generators;
  std::vector<std::vector<int>> words;

  std::size_t size() const { return table.size(); }
  int mul(int a, int b) const { return table[a][b]; }
  int inv(int a) const { return inverse[a]; }
  int pow(int a, int n) const {
    if (n < 0) return pow(inv(a), -n);
    int r = identity;
    for (int i = 0; i < n; ++i) r = mul(r, a);
    return r;
  }
  /// a^-1 b^-1 a b
  int commutator(int a, int b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }

  int order(int a) const {
    int n = 1;
    for (int x = a; x != identity; x = mul(x, a)) ++n;
    return n;
  }

  /// Subgroup generated by the given elements, sorted.
  std::vector<int> subgroup(const std::vector<int>& gens) const {
    std::vector<char> seen(size(), 0);
    std::vector<int> out{identity};
    seen[identity] = 1;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (int g : gens) {
        int y = mul(out[i], g);
        if (!seen[y]) {
          seen[y] = 1;
          out.push_back(y);
        }
      }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Smallest normal subgroup containing the given elements.
  std::vector<int> normal_closure(const std::vector<int>& elems) const {
    std::set<int> conj;
    for (int r : elems)
      for (std::size_t h = 0; h < size(); ++h)
        conj.insert(mul(mul(static_cast<int>(h), r), inv(static_cast<int>(h))));
    return subgroup({conj.begin(), conj.end()});
  }

  std::vector<int> center() const {
    std::vector<int> z;
    for (std::size_t a = 0; a < size(); ++a) {
      bool central = true;
      for (std::size_t b = 0; b < size() && central; ++b)
        central = table[a][b] == table[b][a];
      if (central) z.push_back(static_cast<int>(a));
    }
    return z;
  }

  std::vector<int> commutator_subgroup() const {
    std::set<int> cs;
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = 0; b < size(); ++b)
        cs.insert(commutator(static_cast<int>(a), static_cast<int>(b)));
    return subgroup({cs.begin(), cs.end()});
  }

  bool is_abelian(const std::vector<int>& elems) const {
    for (int a : elems)
      for (int b : elems)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  /// FNV-1a over the table; identifies a labelled Cayley table.
  std::uint64_t table_hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto eat = [&](std::uint64_t v) {
      for (int i = 0; i < 4; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 1099511628211ULL;
      }
    };
    eat(size());
    for (const auto& row : table)
      for (int v : row) eat(static_cast<std::uint64_t>(v));
    return h;
  }

  /// Evaluates a word over generator letters, where letter 2k is generator
  /// k and 2k+1 its inverse, at the given element assignment.
  int evaluate(const std::vector<int>& word, const std::vector<int>& assignment) const {
    int x = identity;
    for (int letter : word) {
      int g = assignment.at(static_cast<std::size_t>(letter / 2));
      x = mul(x, letter % 2 ? inv(g) : g);
    }
    return x;
  }
};

namespace detail {
inline void fill_inverses(FiniteGroup& g) {
  g.inverse.assign(g.size(), -1);
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b)
      if (g.table[a][b] == g.identity) {
        g.inverse[a] = static_cast<int>(b);
        break;
      }
  for (int v : g.inverse)
    if (v < 0) throw InvariantViolation("element without inverse: not a group");
}
}  // namespace detail

/// Closure of `gens` under left multiplication, starting from `identity`.
/// Only products gen * element are ever computed; the full table is derived
/// from the generator words. Throws InvariantViolation past `cap` elements.
template <class T, class Mul>
FiniteGroup generate_group(const T& identity, const std::vector<T>& gens, Mul mul,
                           std::size_t cap, std::vector<T>* elements_out = nullptr) {
  std::vector<T> elems{identity};
  FiniteGroup g;
  g.words.push_back({});
  std::vector<std::vector<int>> left(gens.size());
  auto find = [&](const T& x) -> int {
    for (std::size_t i = 0; i < elems.size(); ++i)
      if (elems[i] == x) return static_cast<int>(i);
    return -1;
  };
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t k = 0; k < gens.size(); ++k) {
      T y = mul(gens[k], elems[i]);
      int idx = find(y);
      if (idx < 0) {
        if (elems.size() >= cap)
          throw InvariantViolation("group exceeds " + std::to_string(cap) + " elements");
        elems.push_back(std::move(y));
        std::vector<int> w{static_cast<int>(k)};
        w.insert(w.end(), g.words[i].begin(), g.words[i].end());
        g.words.push_back(std::move(w));
        idx = static_cast<int>(elems.size() - 1);
      }
      left[k].resize(elems.size(), -1);
      left[k][i] = idx;
    }
  }
  const std::size_t n = elems.size();
  g.table.assign(n, std::vector<int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      int x = static_cast<int>(j);
      for (auto it = g.words[i].rbegin(); it != g.words[i].rend(); ++it) x = left[*it][x];
      g.table[i][j] = x;
    }
  g.identity = 0;
  for (std::size_t k = 0; k < gens.size(); ++k) g.generators.push_back(left[k][0]);
  detail::fill_inverses(g);
  if (elements_out) *elements_out = std::move(elems);
  return g;
}

/// Cayley table of an explicit, closed list of elements (T ordered by <).
template <class T, class Mul>
FiniteGroup group_from_elements(const std::vector<T>& elems, const T& identity, Mul mul) {
  std::map<T, int> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], static_cast<int>(i));
  FiniteGroup g;
  g.table.assign(elems.size(), std::vector<int>(elems.size()));
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j < elems.size(); ++j) {
      auto it = index.find(mul(elems[i], elems[j]));
      if (it == index.end()) throw InvariantViolation("element list is not closed under product");
      g.table[i][j] = it->second;
    }
  auto id = index.find(identity);
  if (id == index.end()) throw InvariantViolation("identity missing from element list");
  g.identity = id->second;
  detail::fill_inverses(g);
  return g;
}

struct IsomorphismResult {
  bool ok = false;
  std::string witness;  // empty on success
  std::vector<int> image;  // image[i] in H of element i of G
};

/// Extends a map on G's generators to all of G along G's generator words and
/// checks that the result is a bijective homomorphism onto H.
inline IsomorphismResult match_isomorphism(const FiniteGroup& G, const FiniteGroup& H,
                                           const std::vector<int>& generator_images) {
  IsomorphismResult r;
  if (G.size() != H.size()) {
    r.witness = "orders differ: " + std::to_string(G.size()) + " vs " + std::to_string(H.size());
    return r;
  }
  if (G.words.size() != G.size() || generator_images.size() != G.generators.size()) {
    r.witness = "source group has no generator words for the given map";
    return r;
  }
  auto spell = [&](int i) {
    std::string s;
    for (int k : G.words[static_cast<std::size_t>(i)]) s += "g" + std::to_string(k);
    return s.empty() ? std::string("1") : s;
  };
  r.image.assign(G.size(), H.identity);
  for (std::size_t i = 0; i < G.size(); ++i) {
    int x = H.identity;
    for (int k : G.words[i]) x = H.mul(x, generator_images[static_cast<std::size_t>(k)]);
    r.image[i] = x;
  }
  std::vector<char> hit(H.size(), 0);
  for (std::size_t i = 0; i < G.size(); ++i) {
    if (hit[r.image[i]]) {
      r.witness = "not injective at " + spell(static_cast<int>(i));
      return r;
    }
    hit[r.image[i]] = 1;
  }
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = 0; j < G.size(); ++j)
      if (r.image[G.table[i][j]] != H.mul(r.image[i], r.image[j])) {
        r.witness = "not a homomorphism at (" + spell(static_cast<int>(i)) + ")*(" +
                    spell(static_cast<int>(j)) + ")";
        return r;
      }
  r.ok = true;
  return r;
}

}  // namespace divfield
