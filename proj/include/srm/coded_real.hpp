// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <compare>
#include <vector>

#include "srm/enumeration.hpp"
#include "srm/errors.hpp"
#include "srm/interval_set.hpp"
#include "srm/rational.hpp"

namespace srm {

/// Schedule F_k(n) = 2^n + k; the weights are gamma_{k,i} = 2^{-F_k(i)}.
struct ExponentSchedule {
  unsigned long k = 0;

  Integer exponent(unsigned long n) const { return pow2_integer(n) + k; }

  friend bool operator==(ExponentSchedule, ExponentSchedule) = default;
  friend auto operator<=>(ExponentSchedule, ExponentSchedule) = default;
};

/// Largest index whose weight 2^{-2^i} is ever expanded into a dense rational.
inline constexpr unsigned long kMaterializeLimit = 20;

/// gamma_{k,i} = 2^{-(2^i + k)} exactly.
inline Rational gamma(ExponentSchedule s, unsigned long i) {
  if (i > kMaterializeLimit)
    throw resource_error("gamma index beyond materialization limit");
  return pow2(-static_cast<long>(s.exponent(i).get_ui()));
}

struct Term {
  Rational coeff;
  ExponentSchedule schedule;
  IntervalSet index_set;
};

/// offset + Σ coeff · <gamma_k, B>. Terms are sorted by (k, B), pairwise
/// distinct in (k, B), with nonzero coefficients and nonempty index sets.
class CodedReal {
 public:
  CodedReal() = default;
  CodedReal(const Rational& offset) : offset_(offset) {}  // NOLINT
  CodedReal(long offset) : offset_(offset) {}              // NOLINT

  CodedReal(Rational offset, std::vector<Term> terms) : offset_(std::move(offset)) {
    terms_ = std::move(terms);
    normalize();
  }

  /// <gamma_k, B> with coefficient 1.
  static CodedReal basis(ExponentSchedule s, IntervalSet b) {
    return CodedReal(Rational(0), {Term{Rational(1), s, std::move(b)}});
  }

  const Rational& offset() const { return offset_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_rational() const { return terms_.empty(); }

  friend CodedReal operator+(const CodedReal& a, const CodedReal& b) {
    std::vector<Term> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return CodedReal(Rational(a.offset_ + b.offset_), std::move(t));
  }

  friend CodedReal operator*(const Rational& c, const CodedReal& x) {
    std::vector<Term> t = x.terms_;
    for (Term& term : t) term.coeff *= c;
    return CodedReal(Rational(c * x.offset_), std::move(t));
  }

  CodedReal operator-() const { return Rational(-1) * *this; }

  friend CodedReal operator-(const CodedReal& a, const CodedReal& b) {
    return a + (-b);
  }

  /// Structural equality of normal forms.
  friend bool operator==(const CodedReal& a, const CodedReal& b) {
    if (a.offset_ != b.offset_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      const Term& x = a.terms_[i];
      const Term& y = b.terms_[i];
      if (x.schedule != y.schedule || x.index_set != y.index_set || x.coeff != y.coeff)
        return false;
    }
    return true;
  }

 private:
  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
      if (a.schedule != b.schedule) return a.schedule < b.schedule;
      return a.index_set < b.index_set;
    });
    std::vector<Term> merged;
    for (Term& t : terms_) {
      if (t.index_set.empty()) continue;
      if (!merged.empty() && merged.back().schedule == t.schedule &&
          merged.back().index_set == t.index_set) {
        merged.back().coeff += t.coeff;
      } else {
        merged.push_back(std::move(t));
      }
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff == 0; });
    terms_ = std::move(merged);
  }

  Rational offset_;
  std::vector<Term> terms_;
};

/// lo <= value <= hi.
struct Enclosure {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& q) const { return lo <= q && q <= hi; }
  bool within(const Enclosure& outer) const { return outer.lo <= lo && hi <= outer.hi; }
};

/// Partial sum over indices i <= N plus the tail bound
/// Σ_{i>N} 2^{-F_k(i)} <= 2^{1-F_k(N+1)} per term, signed by its coefficient.
inline Enclosure eval(const CodedReal& x, unsigned long N) {
  Enclosure e{x.offset(), x.offset()};
  if (x.is_rational()) return e;
  if (N + 1 > kMaterializeLimit)
    throw resource_error("eval precision index beyond materialization limit");
  std::vector<Rational> points;
  points.reserve(N + 1);
  for (unsigned long i = 0; i <= N; ++i) points.push_back(enumerate_rationals(Integer(i)));
  for (const Term& t : x.terms()) {
    Rational partial = 0;
    for (unsigned long i = 0; i <= N; ++i)
      if (t.index_set.contains(points[i])) partial += gamma(t.schedule, i);
    e.lo += t.coeff * partial;
    e.hi += t.coeff * partial;
    const Rational tail = 2 * abs(t.coeff) * gamma(t.schedule, N + 1);
    if (t.coeff > 0)
      e.hi += tail;
    else
      e.lo -= tail;
  }
  return e;
}

}  // namespace srm
