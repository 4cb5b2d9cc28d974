// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace srm {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

namespace detail {

inline bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t pos = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (pos == s.size()) return false;
  for (; pos < s.size(); ++pos)
    if (!std::isdigit(static_cast<unsigned char>(s[pos]))) return false;
  return true;
}

inline Integer parse_integer(std::string_view s) {
  if (!is_integer_literal(s))
    throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  std::string text(s[0] == '+' ? s.substr(1) : s);
  return Integer(text, 10);
}

}  // namespace detail

/// Accepts "p/q" or "p"; the result is canonical.
inline Rational parse_rational(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(detail::parse_integer(s));
  return make_rational(detail::parse_integer(s.substr(0, slash)),
                       detail::parse_integer(s.substr(slash + 1)));
}

/// Always "p/q", including q = 1.
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Integer ceil(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline Integer pow2_integer(unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

/// 2^e for any sign of e.
inline Rational pow2(long e) {
  if (e >= 0) return Rational(pow2_integer(static_cast<unsigned long>(e)));
  return Rational(Integer(1), pow2_integer(static_cast<unsigned long>(-e)));
}

/// Number of binary digits of |n|; 0 for n = 0.
inline std::size_t bit_length(const Integer& n) {
  if (n == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// Decimal rendering with `digits` fractional digits, truncated toward zero.
inline std::string to_decimal(const Rational& r, unsigned digits = 12) {
  const bool neg = r < 0;
  const Rational a = abs(r);
  Integer whole = floor(a);
  Rational frac = a - whole;
  std::string out = (neg ? "-" : "") + whole.get_str() + ".";
  for (unsigned i = 0; i < digits; ++i) {
    frac *= 10;
    const Integer digit = floor(frac);
    out += digit.get_str();
    frac -= digit;
  }
  return out;
}

}  // namespace srm
