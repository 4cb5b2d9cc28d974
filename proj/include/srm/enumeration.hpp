// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "srm/rational.hpp"

namespace srm {

// Calkin-Wilf tree: node 1 is 1/1; node n = a/b has children 2n = a/(a+b) and
// 2n+1 = (a+b)/b. Every positive rational occurs exactly once.

inline Rational calkin_wilf(const Integer& n) {
  if (n < 1) throw std::domain_error("Calkin-Wilf index must be positive");
  Integer a = 1, b = 1;
  const std::size_t bits = bit_length(n);
  for (std::size_t pos = bits - 1; pos-- > 0;) {
    if (mpz_tstbit(n.get_mpz_t(), pos))
      a += b;
    else
      b += a;
  }
  return make_rational(a, b);
}

/// Index of t > 0 in the Calkin-Wilf sequence, or nullopt when the index would
/// need more than `max_bits` binary digits.
inline std::optional<Integer> calkin_wilf_index(const Rational& t,
                                                std::size_t max_bits) {
  if (t <= 0) throw std::domain_error("Calkin-Wilf index needs t > 0");
  Integer p = t.get_num(), q = t.get_den();
  // Runs of equal path bits, collected leaf to root.
  std::vector<std::pair<bool, Integer>> runs;
  Integer depth = 0;
  while (!(p == 1 && q == 1)) {
    Integer steps;
    if (p < q) {
      steps = (q - 1) / p;
      q -= steps * p;
      runs.emplace_back(false, steps);
    } else {
      steps = (p - 1) / q;
      p -= steps * q;
      runs.emplace_back(true, steps);
    }
    depth += steps;
    if (depth >= max_bits) return std::nullopt;
  }
  Integer n = 1;
  for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
    const unsigned long len = it->second.get_ui();
    n <<= len;
    if (it->first) n += pow2_integer(len) - 1;
  }
  return n;
}

inline Integer calkin_wilf_index(const Rational& t) {
  return *calkin_wilf_index(t, static_cast<std::size_t>(-1));
}

/// One end of an interval of positive rationals; `value` unset means +inf.
struct Endpoint {
  std::optional<Rational> value;
  bool closed = false;
};

/// Stern-Brocot simplest rational (least denominator, then least numerator) in
/// the interval (lo, hi) with the given closedness, lo >= 0 and excluding 0.
/// The answer is the node of least depth, hence of least Calkin-Wilf index.
/// nullopt when the tree depth would exceed `max_depth`.
inline std::optional<Rational> simplest_positive(Endpoint lo, Endpoint hi,
                                                 std::size_t max_depth) {
  if (!lo.value) throw std::domain_error("lower endpoint must be finite");
  if (*lo.value < 0) throw std::domain_error("lower endpoint must be >= 0");
  if (*lo.value == 0) lo.closed = false;
  if (hi.value) {
    const int c = cmp(*lo.value, *hi.value);
    if (c > 0 || (c == 0 && !(lo.closed && hi.closed)))
      throw std::domain_error("empty interval");
  }
  std::vector<Integer> terms;
  Integer depth = 0;
  for (;;) {
    const Rational& l = *lo.value;
    const Integer fl = floor(l);
    Integer n = is_integer(l) ? (lo.closed ? fl : Integer(fl + 1)) : Integer(fl + 1);
    if (n < 1) n = 1;
    const bool fits =
        !hi.value || cmp(Rational(n), *hi.value) < 0 ||
        (hi.closed && cmp(Rational(n), *hi.value) == 0);
    if (fits) {
      terms.push_back(n);
      depth += n;
      if (depth > max_depth) return std::nullopt;
      break;
    }
    // x = fl + 1/y with y in (1/(hi - fl), 1/(lo - fl)); closedness swaps.
    terms.push_back(fl);
    depth += fl;
    if (depth > max_depth) return std::nullopt;
    const Rational hi_frac = *hi.value - fl;
    const Rational lo_frac = l - fl;
    Endpoint next_lo{Rational(1 / hi_frac), hi.closed};
    next_lo.value->canonicalize();
    Endpoint next_hi;
    if (lo_frac != 0) {
      next_hi.value = Rational(1 / lo_frac);
      next_hi.value->canonicalize();
      next_hi.closed = lo.closed;
    }
    lo = next_lo;
    hi = next_hi;
  }
  Rational x(terms.back());
  for (std::size_t j = terms.size() - 1; j-- > 0;) {
    x = terms[j] + 1 / x;
    x.canonicalize();
  }
  return x;
}

// Enumeration Q of Q>=0 with property (M). Index j lies in the class
// A_m = {2^m (2c+1) - 1 : c >= 0}; c = 0 gives the integer m, c >= 1 gives
// m + t/(1+t) with t the c-th Calkin-Wilf rational. Hence
// min Q^{-1}([m, m+1)) = 2^m - 1 and Q(2^m - 1) = m.

/// Fractional offset t/(1+t) attached to the c-th element of a class, c >= 1.
inline Rational class_fraction(const Integer& c) {
  const Rational t = calkin_wilf(c);
  Rational u = t / (1 + t);
  u.canonicalize();
  return u;
}

/// Inverse of class_fraction on (0, 1).
inline Rational fraction_to_tree(const Rational& u) {
  Rational t = u / (1 - u);
  t.canonicalize();
  return t;
}

/// Index 2^m (2c + 1) - 1 of the c-th element of level m.
inline Integer level_index(unsigned long m, const Integer& c) {
  return pow2_integer(m) * (2 * c + 1) - 1;
}

/// l_m = min Q^{-1}([m, m+1) ∩ Q) = 2^m - 1.
inline Integer level_minimum(unsigned long m) { return pow2_integer(m) - 1; }

inline Rational enumerate_rationals(const Integer& i) {
  if (i < 0) throw std::domain_error("enumeration index must be >= 0");
  const Integer j = i + 1;
  const unsigned long m = mpz_scan1(j.get_mpz_t(), 0);
  Integer odd = j >> m;
  const Integer c = (odd - 1) / 2;
  if (c == 0) return Rational(Integer(m));
  return Rational(m) + class_fraction(c);
}

inline Integer rational_index(const Rational& q) {
  if (q < 0) throw std::domain_error("enumeration inverse needs q >= 0");
  const Integer m = floor(q);
  if (!m.fits_ulong_p()) throw std::domain_error("integer part out of range");
  const Rational u = q - m;
  const Integer c = (u == 0) ? Integer(0) : calkin_wilf_index(fraction_to_tree(u));
  return level_index(m.get_ui(), c);
}

}  // namespace srm
