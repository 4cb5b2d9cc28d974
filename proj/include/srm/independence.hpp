// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <set>
#include <vector>

#include "srm/coded_real.hpp"
#include "srm/interval_set.hpp"

namespace srm {

/// Block S = [block, block+1) on which every index set P_i traces exactly
/// [a, b_i) with pairwise distinct b_i > a. Such a witness makes
/// {<gamma_k, P_i>} ∪ {1} linearly independent over Q.
struct IndependenceWitness {
  Integer block;
  Rational a;
  std::vector<Rational> b;
};

/// Re-derives every trace by intersection; needs nothing but the witness.
inline bool verify_witness(const IndependenceWitness& w, const std::vector<IntervalSet>& terms) {
  if (terms.empty() || w.b.size() != terms.size()) return false;
  const IntervalSet s = IntervalSet::half_open(Rational(w.block), Rational(w.block + 1));
  if (!s.contains(w.a)) return false;
  std::set<Rational> seen;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!(w.a < w.b[i]) || w.b[i] > w.block + 1) return false;
    if (!seen.insert(w.b[i]).second) return false;
    if (!(terms[i].intersect(s) == IntervalSet::half_open(w.a, w.b[i]))) return false;
  }
  return true;
}

/// Searches the unit blocks met by the index sets, lowest first. nullopt is
/// inconclusive; it does not prove dependence.
inline std::optional<IndependenceWitness> independence_witness(
    const std::vector<IntervalSet>& terms, ExponentSchedule /*schedule*/,
    unsigned long max_blocks = 1024) {
  if (terms.empty()) throw std::domain_error("independence witness needs at least one term");
  std::set<Integer> candidates;
  for (const IntervalSet& t : terms)
    for (const Block& b : t.blocks())
      for (Integer n = floor(b.lo); n < b.hi && candidates.size() < max_blocks; ++n)
        candidates.insert(n);
  for (const Integer& n : candidates) {
    const IntervalSet s = IntervalSet::half_open(Rational(n), Rational(n + 1));
    IndependenceWitness w{n, Rational(0), {}};
    bool ok = true;
    for (const IntervalSet& t : terms) {
      const IntervalSet trace = t.intersect(s);
      if (trace.blocks().size() != 1) {
        ok = false;
        break;
      }
      const Block& blk = trace.blocks().front();
      if (w.b.empty())
        w.a = blk.lo;
      else if (blk.lo != w.a) {
        ok = false;
        break;
      }
      w.b.push_back(blk.hi);
    }
    if (ok && verify_witness(w, terms)) return w;
  }
  return std::nullopt;
}

}  // namespace srm
