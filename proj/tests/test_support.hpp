#pragma once

#include "divfield/tower.hpp"

#include <random>
#include <string>
#include <vector>

namespace divfield::testing {

inline Rational random_rational(std::mt19937_64& rng, int height) {
  std::uniform_int_distribution<int> num(-height, height), den(1, height);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline TowerElement random_element(std::mt19937_64& rng, const Tower& t, int height = 9,
                                   double density = 1.0) {
  std::bernoulli_distribution keep(density);
  Coeffs c(t.dimension());
  for (auto& r : c)
    if (keep(rng)) r = random_rational(rng, height);
  return {t, std::move(c)};
}

inline TowerElement random_nonzero(std::mt19937_64& rng, const Tower& t, int height = 9) {
  for (;;) {
    auto x = random_element(rng, t, height);
    if (!x.is_zero()) return x;
  }
}

/// Q(i, sqrt2, sqrt(1+i), sqrt3): a tower of dimension 16 whose third radicand
/// is not rational.
inline Tower sample_tower(std::size_t levels = 4) {
  Tower t;
  auto step = [&](const TowerElement& d, const char* label) {
    if (t.depth() < levels) t = adjoin_sqrt(t, d, label).tower;
  };
  step(TowerElement(t, Rational(-1)), "i");
  step(TowerElement(t, Rational(2)), "r2");
  if (t.depth() < levels) {
    auto one_plus_i = TowerElement::one(t) + TowerElement::generator(t, 0);
    step(one_plus_i, "w");
  }
  step(TowerElement(t, Rational(3)), "r3");
  return t;
}

}  // namespace divfield::testing
