// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include "srm/rational.hpp"

namespace srm {

/// Half-open rational block [lo, hi) with 0 <= lo < hi.
struct Block {
  Rational lo;
  Rational hi;

  friend bool operator==(const Block& a, const Block& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
  friend std::strong_ordering operator<=>(const Block& a, const Block& b) {
    if (const int c = cmp(a.lo, b.lo); c != 0) return c <=> 0;
    return cmp(a.hi, b.hi) <=> 0;
  }
};

/// Subset of Q>=0 given by a finite disjoint union of half-open blocks. Blocks
/// are sorted, pairwise disjoint and never touch, so the representation is
/// unique. Every nonempty set is infinite.
class IntervalSet {
 public:
  IntervalSet() = default;

  IntervalSet(std::initializer_list<std::pair<Rational, Rational>> blocks) {
    std::vector<Block> raw;
    for (const auto& [lo, hi] : blocks) raw.push_back({lo, hi});
    assign(std::move(raw));
  }

  explicit IntervalSet(std::vector<Block> blocks) { assign(std::move(blocks)); }

  /// [lo, hi) ∩ Q>=0; empty when hi <= max(lo, 0).
  static IntervalSet half_open(const Rational& lo, const Rational& hi) {
    return IntervalSet(std::vector<Block>{{lo, hi}});
  }

  const std::vector<Block>& blocks() const { return blocks_; }
  bool empty() const { return blocks_.empty(); }

  bool contains(const Rational& q) const {
    auto it = std::upper_bound(
        blocks_.begin(), blocks_.end(), q,
        [](const Rational& v, const Block& b) { return v < b.lo; });
    if (it == blocks_.begin()) return false;
    --it;
    return q < it->hi;
  }

  IntervalSet unite(const IntervalSet& other) const {
    std::vector<Block> all = blocks_;
    all.insert(all.end(), other.blocks_.begin(), other.blocks_.end());
    return IntervalSet(std::move(all));
  }

  IntervalSet intersect(const IntervalSet& other) const {
    std::vector<Block> out;
    std::size_t i = 0, j = 0;
    while (i < blocks_.size() && j < other.blocks_.size()) {
      const Block& a = blocks_[i];
      const Block& b = other.blocks_[j];
      const Rational& lo = a.lo < b.lo ? b.lo : a.lo;
      const Rational& hi = a.hi < b.hi ? a.hi : b.hi;
      if (lo < hi) out.push_back({lo, hi});
      if (a.hi < b.hi)
        ++i;
      else
        ++j;
    }
    return IntervalSet(std::move(out));
  }

  IntervalSet subtract(const IntervalSet& other) const {
    std::vector<Block> out;
    for (const Block& a : blocks_) {
      Rational cursor = a.lo;
      for (const Block& b : other.blocks_) {
        if (b.hi <= cursor || b.lo >= a.hi) continue;
        if (cursor < b.lo) out.push_back({cursor, b.lo});
        if (cursor < b.hi) cursor = b.hi;
        if (cursor >= a.hi) break;
      }
      if (cursor < a.hi) out.push_back({cursor, a.hi});
    }
    return IntervalSet(std::move(out));
  }

  friend bool operator==(const IntervalSet& a, const IntervalSet& b) {
    return a.blocks_ == b.blocks_;
  }
  friend std::strong_ordering operator<=>(const IntervalSet& a,
                                          const IntervalSet& b) {
    return std::lexicographical_compare_three_way(
        a.blocks_.begin(), a.blocks_.end(), b.blocks_.begin(), b.blocks_.end());
  }

 private:
  void assign(std::vector<Block> raw) {
    std::vector<Block> kept;
    kept.reserve(raw.size());
    for (Block& b : raw) {
      if (b.lo < 0) b.lo = 0;
      if (b.lo < b.hi) kept.push_back(std::move(b));
    }
    std::sort(kept.begin(), kept.end());
    for (Block& b : kept) {
      if (!blocks_.empty() && b.lo <= blocks_.back().hi) {
        if (blocks_.back().hi < b.hi) blocks_.back().hi = b.hi;
      } else {
        blocks_.push_back(std::move(b));
      }
    }
  }

  std::vector<Block> blocks_;
};

}  // namespace srm
