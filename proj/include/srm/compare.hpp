// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "srm/coded_real.hpp"
#include "srm/enumeration.hpp"
#include "srm/errors.hpp"

namespace srm {

enum class Ordering { less, equal, greater, unresolved };

inline const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::less: return "less";
    case Ordering::equal: return "equal";
    case Ordering::greater: return "greater";
    case Ordering::unresolved: return "unresolved";
  }
  return "unresolved";
}

/// Default cap on the number of sign events examined by one comparison.
inline constexpr unsigned kDefaultMaxPrecision = 64;

/// Calkin-Wilf depth beyond which a piece's least index is treated as unknown.
inline constexpr std::size_t kTreeDepthLimit = std::size_t{1} << 16;

/// Cap on the number of integer levels a single block may span.
inline constexpr unsigned long kLevelLimit = 1ul << 16;

namespace detail {

/// Constant weight on a half-open block, measured in units of schedule k = 0.
struct WeightedBlock {
  Block block;
  Rational weight;
};

/// Sums overlapping weights, drops zero regions and merges touching blocks of
/// equal weight. The result is the unique description of the step function.
inline std::vector<WeightedBlock> atomize(const std::vector<WeightedBlock>& raw) {
  std::map<Rational, Rational> delta;
  for (const WeightedBlock& wb : raw) {
    delta[wb.block.lo] += wb.weight;
    delta[wb.block.hi] -= wb.weight;
  }
  std::vector<WeightedBlock> out;
  Rational running = 0;
  const Rational* start = nullptr;
  for (auto it = delta.begin(); it != delta.end(); ++it) {
    if (start != nullptr && running != 0) {
      if (!out.empty() && out.back().block.hi == *start && out.back().weight == running)
        out.back().block.hi = it->first;
      else
        out.push_back({{*start, it->first}, running});
    }
    running += it->second;
    start = &it->first;
  }
  return out;
}

inline bool two_pow_at_least(const Integer& i, std::size_t bits) {
  if (i >= 64) return true;
  return (std::uint64_t{1} << i.get_ui()) >= bits;
}

/// 2^{-2^i} for i within the materialization limit.
inline Rational weight_at(const Integer& i) {
  if (i > kMaterializeLimit) throw resource_error("index beyond materialization limit");
  return pow2(-(1l << i.get_ui()));
}

/// Fractional piece {m + u : u in (lo, hi)} of one integer level, 0 <= lo <= hi <= 1,
/// endpoints included according to the flags; hi = 1 is always excluded.
struct Piece {
  unsigned long level = 0;
  Rational lo, hi;
  bool lo_closed = true;
  bool hi_closed = false;
  Rational weight;
  Rational frac;  // fractional part of the least-index element, set by locate()
};

inline bool piece_empty(const Piece& p) {
  const int c = cmp(p.lo, p.hi);
  return c > 0 || (c == 0 && !(p.lo_closed && p.hi_closed));
}

/// Least enumeration index inside the piece; nullopt beyond the depth limit.
inline std::optional<Integer> locate(Piece& p) {
  if (p.lo == 0 && p.lo_closed) {
    p.frac = 0;
    return level_minimum(p.level);
  }
  Endpoint lo{fraction_to_tree(p.lo), p.lo_closed};
  Endpoint hi;
  if (p.hi < 1) hi = Endpoint{fraction_to_tree(p.hi), p.hi_closed};
  const std::optional<Rational> t = simplest_positive(lo, hi, kTreeDepthLimit);
  if (!t) return std::nullopt;
  const Integer c = calkin_wilf_index(*t);
  p.frac = *t / (1 + *t);
  p.frac.canonicalize();
  return level_index(p.level, c);
}

/// Ordered stream of (index, weight) pairs of a lacunary series.
class EventQueue {
 public:
  struct Event {
    Integer index;
    Rational weight;
    bool horizon = false;
  };

  EventQueue(const std::vector<WeightedBlock>& steps, const std::map<Integer, Rational>& points)
      : points_(points) {
    for (const WeightedBlock& wb : steps) {
      const Integer first = floor(wb.block.lo);
      const Integer last = ceil(wb.block.hi) - 1;
      if (last - first >= kLevelLimit) throw resource_error("index set spans too many levels");
      for (Integer m = first; m <= last; ++m) {
        Piece p;
        p.level = m.get_ui();
        p.lo = wb.block.lo > m ? Rational(wb.block.lo - m) : Rational(0);
        p.hi = wb.block.hi < m + 1 ? Rational(wb.block.hi - m) : Rational(1);
        p.weight = wb.weight;
        push(std::move(p));
      }
    }
  }

  std::optional<Event> peek() const {
    const bool has_step = !pieces_.empty();
    const bool has_point = !points_.empty();
    if (!has_step && !has_point) {
      if (beyond_horizon_ > 0) return Event{pow2_integer(kTreeDepthLimit), Rational(0), true};
      return std::nullopt;
    }
    if (has_step && (!has_point || pieces_.begin()->first <= points_.begin()->first)) {
      Event e{pieces_.begin()->first, pieces_.begin()->second.weight};
      if (has_point && points_.begin()->first == e.index) e.weight += points_.begin()->second;
      return e;
    }
    return Event{points_.begin()->first, points_.begin()->second};
  }

  void pop() {
    const bool has_step = !pieces_.empty();
    const bool has_point = !points_.empty();
    if (has_step && (!has_point || pieces_.begin()->first <= points_.begin()->first)) {
      if (has_point && points_.begin()->first == pieces_.begin()->first)
        points_.erase(points_.begin());
      Piece p = std::move(pieces_.begin()->second);
      pieces_.erase(pieces_.begin());
      Piece left = p;
      left.hi = p.frac;
      left.hi_closed = false;
      Piece right = std::move(p);
      right.lo = right.frac;
      right.lo_closed = false;
      push(std::move(left));
      push(std::move(right));
    } else if (has_point) {
      points_.erase(points_.begin());
    }
  }

 private:
  void push(Piece p) {
    if (piece_empty(p)) return;
    std::optional<Integer> idx = locate(p);
    if (!idx) {
      ++beyond_horizon_;
      return;
    }
    pieces_.emplace(std::move(*idx), std::move(p));
  }

  std::map<Integer, Piece> pieces_;
  std::map<Integer, Rational> points_;
  std::size_t beyond_horizon_ = 0;
};

}  // namespace detail

/// Exact rational offset plus a lacunary series Σ c_i 2^{-2^i}, where c_i is a
/// step function of Q(i) (from coded terms) plus finitely many point masses.
/// A nonzero step function forces an irrational, hence nonzero, value.
class LacunarySum {
 public:
  LacunarySum() = default;
  explicit LacunarySum(const CodedReal& x) { add(x); }

  LacunarySum& add(const CodedReal& x, const Rational& scale = Rational(1)) {
    offset_ += scale * x.offset();
    for (const Term& t : x.terms()) {
      const Rational w = scale * t.coeff * pow2(-static_cast<long>(t.schedule.k));
      for (const Block& b : t.index_set.blocks()) blocks_.push_back({b, w});
    }
    return *this;
  }

  LacunarySum& add_rational(const Rational& q) {
    offset_ += q;
    return *this;
  }

  /// coeff · gamma_{k,index}, kept symbolic so huge indices stay cheap.
  LacunarySum& add_gamma(const Rational& coeff, ExponentSchedule s, const Integer& index) {
    Rational& slot = points_[index];
    slot += coeff * pow2(-static_cast<long>(s.k));
    if (slot == 0) points_.erase(index);
    return *this;
  }

  bool has_infinite_support() const { return !detail::atomize(blocks_).empty(); }

  /// less, equal or greater than zero; unresolved once `max_steps` events were
  /// absorbed without a decision.
  Ordering sign(unsigned max_steps = kDefaultMaxPrecision) const {
    const std::vector<detail::WeightedBlock> steps = detail::atomize(blocks_);
    if (steps.empty() && points_.empty()) return from_int(sgn(offset_));

    Rational bound = 0;
    for (const auto& wb : steps)
      if (abs(wb.weight) > bound) bound = abs(wb.weight);
    for (const auto& [idx, w] : points_) bound += abs(w);
    const Rational twice_bound = 2 * bound;

    detail::EventQueue events(steps, points_);
    Rational acc = offset_;
    std::optional<std::pair<Integer, Rational>> symbolic;  // acc = w · 2^{-2^I}
    unsigned taken = 0;
    for (;;) {
      const std::optional<detail::EventQueue::Event> ev = events.peek();
      if (!ev) return symbolic ? from_int(sgn(symbolic->second)) : from_int(sgn(acc));
      if (symbolic) {
        if (symbolic_dominates(*symbolic, twice_bound, ev->index))
          return from_int(sgn(symbolic->second));
        return Ordering::unresolved;
      }
      if (acc != 0 && dominates(acc, twice_bound, ev->index)) return from_int(sgn(acc));
      if (ev->horizon || taken == max_steps) return Ordering::unresolved;
      events.pop();
      ++taken;
      if (ev->weight == 0) continue;
      if (ev->index <= kMaterializeLimit) {
        acc += ev->weight * detail::weight_at(ev->index);
      } else if (acc == 0) {
        symbolic.emplace(ev->index, ev->weight);
      } else {
        return Ordering::unresolved;
      }
    }
  }

 private:
  static Ordering from_int(int s) {
    return s < 0 ? Ordering::less : (s > 0 ? Ordering::greater : Ordering::equal);
  }

  /// |acc| > twice_bound · 2^{-2^i}, the largest possible remaining tail.
  static bool dominates(const Rational& acc, const Rational& twice_bound, const Integer& i) {
    if (twice_bound == 0) return true;
    Rational ratio = abs(acc) / twice_bound;
    ratio.canonicalize();
    if (ratio >= 1) return true;
    Rational inv = 1 / ratio;
    inv.canonicalize();
    const std::size_t bits = bit_length(ceil(inv));
    if (detail::two_pow_at_least(i, bits)) return true;
    return ratio > detail::weight_at(i);
  }

  static bool symbolic_dominates(const std::pair<Integer, Rational>& sym,
                                 const Rational& twice_bound, const Integer& i) {
    if (i <= sym.first) return false;
    Rational ratio = abs(sym.second) / twice_bound;
    ratio.canonicalize();
    if (ratio >= 1) return true;
    Rational inv = 1 / ratio;
    inv.canonicalize();
    const std::size_t bits = bit_length(ceil(inv));
    // Exponent gap 2^i - 2^I >= 2^I once i > I.
    return detail::two_pow_at_least(sym.first, bits);
  }

  Rational offset_;
  std::vector<detail::WeightedBlock> blocks_;
  std::map<Integer, Rational> points_;
};

inline Ordering compare(const CodedReal& x, const CodedReal& y,
                        unsigned max_precision = kDefaultMaxPrecision) {
  if (x.is_rational() && y.is_rational()) {
    const int c = cmp(x.offset(), y.offset());
    return c < 0 ? Ordering::less : (c > 0 ? Ordering::greater : Ordering::equal);
  }
  LacunarySum diff(x);
  diff.add(y, Rational(-1));
  return diff.sign(max_precision);
}

/// Value equality. A difference whose step function is nonzero is irrational,
/// so only the rational remainder needs an exact check; the result is never
/// unresolved.
inline bool equals(const CodedReal& x, const CodedReal& y) {
  if (x == y) return true;
  LacunarySum diff(x);
  diff.add(y, Rational(-1));
  if (diff.has_infinite_support()) return false;
  return diff.sign(static_cast<unsigned>(-1)) == Ordering::equal;
}

/// x <= y; throws unresolved_error when the sign cannot be settled.
inline bool certainly_le(const CodedReal& x, const CodedReal& y,
                         unsigned max_precision = kDefaultMaxPrecision) {
  const Ordering o = compare(x, y, max_precision);
  if (o == Ordering::unresolved)
    throw unresolved_error("comparison unresolved at the precision cap");
  return o != Ordering::greater;
}

inline CodedReal abs(const CodedReal& x, unsigned max_precision = kDefaultMaxPrecision) {
  const Ordering o = compare(x, CodedReal(0), max_precision);
  if (o == Ordering::unresolved) throw unresolved_error("sign unresolved at the precision cap");
  return o == Ordering::less ? -x : x;
}

}  // namespace srm
