#pragma once

// Dense univariate polynomials over Rational or TowerElement.

#include "divfield/tower.hpp"

#include <cstddef>
#include <vector>

namespace divfield {

inline bool coeff_is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool coeff_is_zero(const TowerElement& x) { return x.is_zero(); }

/// Coefficients low degree first. `zero` fixes the coefficient ring (for
/// TowerElement, its tower) so the zero polynomial still knows where it lives.
template <class R>
class Polynomial {
 public:
  explicit Polynomial(R zero) : zero_(std::move(zero)) {}
  Polynomial(R zero, std::vector<R> c) : zero_(std::move(zero)), c_(std::move(c)) { trim(); }

  static Polynomial constant(const R& zero, const R& c) { return Polynomial(zero, {c}); }
  /// x
  static Polynomial x(const R& zero, const R& one) { return Polynomial(zero, {zero, one}); }

  const std::vector<R>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const R& coeff(std::size_t i) const { return i < c_.size() ? c_[i] : zero_; }

  R operator()(const R& v) const {
    R acc = zero_;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * v + *it;
    return acc;
  }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    std::vector<R> c(std::max(p.c_.size(), q.c_.size()), p.zero_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = p.coeff(i) + q.coeff(i);
    return {p.zero_, std::move(c)};
  }
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q) {
    std::vector<R> c(std::max(p.c_.size(), q.c_.size()), p.zero_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = p.coeff(i) - q.coeff(i);
    return {p.zero_, std::move(c)};
  }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) return Polynomial(p.zero_);
    std::vector<R> c(p.c_.size() + q.c_.size() - 1, p.zero_);
    for (std::size_t i = 0; i < p.c_.size(); ++i) {
      if (coeff_is_zero(p.c_[i])) continue;
      for (std::size_t j = 0; j < q.c_.size(); ++j)
        if (!coeff_is_zero(q.c_[j])) c[i + j] = c[i + j] + p.c_[i] * q.c_[j];
    }
    return {p.zero_, std::move(c)};
  }
  friend Polynomial operator*(const R& s, const Polynomial& p) {
    std::vector<R> c = p.c_;
    for (auto& v : c) v = s * v;
    return {p.zero_, std::move(c)};
  }

  friend bool operator==(const Polynomial& p, const Polynomial& q) {
    if (p.c_.size() != q.c_.size()) return false;
    for (std::size_t i = 0; i < p.c_.size(); ++i)
      if (!(p.c_[i] == q.c_[i])) return false;
    return true;
  }

 private:
  void trim() {
    while (!c_.empty() && coeff_is_zero(c_.back())) c_.pop_back();
  }
  R zero_;
  std::vector<R> c_;
};

}  // namespace divfield
