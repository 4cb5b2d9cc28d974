// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "srm/rational.hpp"

namespace srm {

/// Open dyadic interval (j / 2^e, (j+1) / 2^e), j >= 0. These intervals form a
/// countable base of (0, inf).
struct DyadicInterval {
  unsigned long exponent = 0;
  Integer numerator;

  Rational lo() const { return make_rational(numerator, pow2_integer(exponent)); }
  Rational hi() const { return make_rational(numerator + 1, pow2_integer(exponent)); }
};

/// Family alpha consists of the rationals J / (2^E 3^alpha) with gcd(J, 6) = 1
/// and E >= 1. The exact power of 3 in the reduced denominator is alpha, so
/// distinct families are disjoint.
///
/// The family element chosen in a dyadic interval U of exponent e uses
/// E = e + 3 + seed and the least admissible J. Distinct exponents give
/// distinct denominators and equal exponents give disjoint intervals, so the
/// choice is injective in U.
inline Rational family_element(unsigned long alpha, unsigned long seed, const DyadicInterval& u) {
  Integer scale = pow2_integer(3 + seed);
  Integer three;
  mpz_ui_pow_ui(three.get_mpz_t(), 3, alpha);
  scale *= three;
  Integer num = u.numerator * scale + 1;
  // The scaled interval has length >= 8, so one of the first six candidates
  // is coprime to 6.
  while (mpz_divisible_ui_p(num.get_mpz_t(), 2) || mpz_divisible_ui_p(num.get_mpz_t(), 3)) ++num;
  return make_rational(num, pow2_integer(u.exponent + 3 + seed) * three);
}

/// Cantor unpairing n -> (x, y) with n = (x+y)(x+y+1)/2 + y.
inline std::pair<Integer, Integer> cantor_unpair(const Integer& n) {
  Integer w;
  const Integer disc = 8 * n + 1;
  mpz_sqrt(w.get_mpz_t(), disc.get_mpz_t());
  w = (w - 1) / 2;
  const Integer t = w * (w + 1) / 2;
  const Integer y = n - t;
  return {w - y, y};
}

/// Effective stream over family alpha: draw n is the family element in the
/// n-th base interval U_n, where n = pair(e, j) indexes (j/2^e, (j+1)/2^e).
/// Single owner; the cursor is the only state.
class DenseStream {
 public:
  explicit DenseStream(unsigned long alpha, unsigned long seed = 0) : alpha_(alpha), seed_(seed) {}

  unsigned long family() const { return alpha_; }
  unsigned long seed() const { return seed_; }
  const Integer& cursor() const { return cursor_; }

  static DyadicInterval base_interval(const Integer& n) {
    const auto [e, j] = cantor_unpair(n);
    return DyadicInterval{e.get_ui(), j};
  }

  Rational next() {
    const Rational v = element_in(base_interval(cursor_));
    ++cursor_;
    return v;
  }

  Rational element_in(const DyadicInterval& u) const { return family_element(alpha_, seed_, u); }

 private:
  unsigned long alpha_;
  unsigned long seed_;
  Integer cursor_ = 0;
};

inline DenseStream dense_decomposition(unsigned long alpha, unsigned long seed = 0) {
  return DenseStream(alpha, seed);
}

}  // namespace srm
