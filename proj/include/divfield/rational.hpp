#pragma once

// Exact rationals. GMP's mpq_class keeps every value in lowest terms with a
// positive denominator, so 0 is always 0/1.

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace divfield {

using Rational = mpq_class;
using Integer = mpz_class;

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Parses "p", "-p" or "p/q" with decimal integers. Rejects q = 0 and
/// anything that is not a plain integer ratio.
inline Rational parse_rational(std::string_view text) {
  auto valid_int = [](std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  const auto den =
      slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false))
    throw ParseError("not a rational: '" + std::string(text) + "'");
  std::string num_s(num);
  if (num_s[0] == '+') num_s.erase(0, 1);
  Integer p(num_s, 10);
  Integer q(std::string(den), 10);
  if (q == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// "p/q", or "p" when q = 1.
inline std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Square root in Q, if there is one. The nonnegative root is returned.
inline std::optional<Rational> rational_sqrt(const Rational& r) {
  if (sgn(r) < 0) return std::nullopt;
  if (sgn(r) == 0) return Rational(0);
  if (!mpz_perfect_square_p(r.get_num_mpz_t()) || !mpz_perfect_square_p(r.get_den_mpz_t()))
    return std::nullopt;
  Integer p = sqrt(r.get_num());
  Integer q = sqrt(r.get_den());
  return Rational(p, q);
}

/// Max of |numerator| and denominator.
inline Integer height(const Rational& r) {
  Integer p = abs(r.get_num());
  return p > r.get_den() ? p : Integer(r.get_den());
}

}  // namespace divfield
