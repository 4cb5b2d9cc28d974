// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "srm/coded_real.hpp"
#include "srm/finite_metric.hpp"
#include "srm/independence.hpp"
#include "srm/registry.hpp"

namespace srm {

/// Registry family behind one term of a distance; gauge 0 marks a hub term.
struct TermTag {
  unsigned long gauge = 0;
  bool hub() const { return gauge == ValueRegistry::kReservedGauge; }

  friend bool operator==(const TermTag&, const TermTag&) = default;
};

/// Coordinates of a value in the basis {1} ∪ atoms.
struct LinearForm {
  Rational constant;
  std::vector<Rational> coords;

  friend bool operator==(const LinearForm&, const LinearForm&) = default;
};

/// Evidence that one distance is independent of 1 (kind single) or that two
/// distances are independent of each other (kind pair). The witness makes
/// {1} ∪ atoms independent; the forms then reduce the claim to rank.
struct IndependenceEntry {
  enum class Kind { single, pair };
  Kind kind = Kind::single;
  std::vector<std::pair<std::string, std::string>> pairs;
  ExponentSchedule schedule;
  std::vector<IntervalSet> atoms;
  IndependenceWitness witness;
  std::vector<LinearForm> forms;
  std::vector<std::vector<TermTag>> tags;
};

struct CheckOutcome {
  bool ok = false;
  std::string reason;
};

namespace detail {

/// Gauge id of an atom ⊔_m [m, r_m): every r_m must be a recorded draw of one
/// gauge at level m. nullopt when the atom is not of this shape.
inline std::optional<unsigned long> atom_gauge(const IntervalSet& atom,
                                               const std::map<Rational, SemiMetricDraw>& index) {
  std::optional<unsigned long> gauge;
  for (const Block& b : atom.blocks()) {
    auto it = index.find(b.hi);
    if (it == index.end()) return std::nullopt;
    if (!is_integer(b.lo) || b.lo != Rational(Integer(it->second.level))) return std::nullopt;
    if (gauge && *gauge != it->second.gauge) return std::nullopt;
    gauge = it->second.gauge;
  }
  return gauge;
}

inline std::vector<TermTag> tags_of(const CodedReal& x,
                                    const std::map<Rational, SemiMetricDraw>& index) {
  std::vector<TermTag> tags;
  for (const Term& t : x.terms()) {
    const auto g = atom_gauge(t.index_set, index);
    if (!g) throw std::domain_error("term index set is not drawn from a registered family");
    tags.push_back(TermTag{*g});
  }
  return tags;
}

/// Hypothesis shape for one sum: block terms with coefficient 1 from distinct
/// gauges, at most one hub term which must match a recorded hub allocation
/// (offset P(i), coefficient q, basis s), no offset without a hub term.
inline CheckOutcome sum_shape(const CodedReal& x, const std::vector<TermTag>& tags,
                              const RegistrySnapshot& reg) {
  if (x.terms().empty()) return {false, "sum has no coded terms"};
  if (x.terms().size() > 3) return {false, "sum has more than three terms"};
  std::set<unsigned long> block_gauges;
  int hubs = 0;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const Term& t = x.terms()[i];
    if (tags[i].hub()) {
      ++hubs;
      const auto it = std::find_if(reg.hubs.begin(), reg.hubs.end(), [&](const HubAllocation& h) {
        return h.s.terms().size() == 1 && h.s.terms()[0].index_set == t.index_set;
      });
      if (it == reg.hubs.end()) return {false, "hub term without a recorded allocation"};
      if (t.coeff != it->q || x.offset() != it->p_value)
        return {false, "hub term does not match its allocation"};
    } else {
      if (t.coeff != 1) return {false, "block term with coefficient other than 1"};
      if (!block_gauges.insert(tags[i].gauge).second) return {false, "repeated block gauge"};
    }
  }
  if (hubs > 1) return {false, "more than one hub term"};
  if (hubs == 0 && x.offset() != 0) return {false, "rational offset without a hub term"};
  return {true, ""};
}

inline LinearForm form_of(const CodedReal& x, const std::vector<IntervalSet>& atoms) {
  LinearForm f{x.offset(), std::vector<Rational>(atoms.size(), Rational(0))};
  for (const Term& t : x.terms()) {
    const auto it = std::lower_bound(atoms.begin(), atoms.end(), t.index_set);
    f.coords[static_cast<std::size_t>(it - atoms.begin())] = t.coeff;
  }
  return f;
}

inline bool coords_nonzero(const LinearForm& f) {
  return std::any_of(f.coords.begin(), f.coords.end(), [](const Rational& c) { return c != 0; });
}

/// Rank 2 test for two vectors (constant, coords...).
inline bool independent(const LinearForm& a, const LinearForm& b) {
  std::vector<Rational> u{a.constant}, v{b.constant};
  u.insert(u.end(), a.coords.begin(), a.coords.end());
  v.insert(v.end(), b.coords.begin(), b.coords.end());
  if (u.size() != v.size()) return false;
  const bool u_zero = std::all_of(u.begin(), u.end(), [](const Rational& c) { return c == 0; });
  const bool v_zero = std::all_of(v.begin(), v.end(), [](const Rational& c) { return c == 0; });
  if (u_zero || v_zero) return false;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j)
      if (u[i] * v[j] != u[j] * v[i]) return true;
  return false;
}

inline CodedReal rebuild(const LinearForm& f, const std::vector<IntervalSet>& atoms,
                         ExponentSchedule s) {
  std::vector<Term> terms;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (f.coords[i] != 0) terms.push_back({f.coords[i], s, atoms[i]});
  return CodedReal(f.constant, std::move(terms));
}

inline std::optional<IndependenceEntry> build_entry(const std::vector<CodedReal>& values,
                                                    const RegistrySnapshot& reg) {
  const auto index = reg.value_index();
  IndependenceEntry e;
  e.kind = values.size() == 1 ? IndependenceEntry::Kind::single : IndependenceEntry::Kind::pair;
  e.schedule = ExponentSchedule{reg.k};
  std::set<IntervalSet> atoms;
  for (const CodedReal& v : values) {
    for (const Term& t : v.terms()) {
      if (t.schedule != e.schedule) return std::nullopt;
      atoms.insert(t.index_set);
    }
    e.tags.push_back(tags_of(v, index));
  }
  if (atoms.empty()) return std::nullopt;
  e.atoms.assign(atoms.begin(), atoms.end());
  for (const CodedReal& v : values) e.forms.push_back(form_of(v, e.atoms));
  if (e.kind == IndependenceEntry::Kind::pair) {
    for (std::size_t i = 0; i < 2; ++i)
      if (!sum_shape(values[i], e.tags[i], reg).ok) return std::nullopt;
    if (!independent(e.forms[0], e.forms[1])) return std::nullopt;
  } else if (!coords_nonzero(e.forms[0])) {
    return std::nullopt;
  }
  const auto w = independence_witness(e.atoms, e.schedule);
  if (!w) return std::nullopt;
  e.witness = *w;
  return e;
}

}  // namespace detail

/// Hypothesis check for two sums of registered terms; on success the entry
/// certifies that x and y are linearly independent over Q. nullopt is
/// inconclusive. Terms outside every registered family throw domain_error.
inline std::optional<IndependenceEntry> sum_independence_check(const RegistrySnapshot& reg,
                                                               const CodedReal& x,
                                                               const CodedReal& y) {
  if (x == y) {
    // Still validate the registry tags so unregistered input is reported.
    detail::tags_of(x, reg.value_index());
    return std::nullopt;
  }
  return detail::build_entry({x, y}, reg);
}

/// Certificate that x and 1 are linearly independent over Q.
inline std::optional<IndependenceEntry> single_independence_check(const RegistrySnapshot& reg,
                                                                  const CodedReal& x) {
  return detail::build_entry({x}, reg);
}

/// Re-checks an entry against the metric and a registry snapshot only.
inline CheckOutcome verify_entry(const IndependenceEntry& e, const FiniteMetric& metric,
                                 const RegistrySnapshot& reg) {
  const std::size_t expected = e.kind == IndependenceEntry::Kind::single ? 1 : 2;
  if (e.pairs.size() != expected || e.forms.size() != expected || e.tags.size() != expected)
    return {false, "entry arity mismatch"};
  if (e.schedule != ExponentSchedule{reg.k}) return {false, "schedule differs from registry"};
  if (!std::is_sorted(e.atoms.begin(), e.atoms.end()) ||
      std::adjacent_find(e.atoms.begin(), e.atoms.end()) != e.atoms.end())
    return {false, "atoms not sorted and distinct"};
  for (const LinearForm& f : e.forms)
    if (f.coords.size() != e.atoms.size()) return {false, "coordinate length mismatch"};
  const auto index = reg.value_index();
  std::vector<CodedReal> values;
  for (std::size_t i = 0; i < expected; ++i) {
    const auto& [p, q] = e.pairs[i];
    const CodedReal& d = metric(metric.index_of(p), metric.index_of(q));
    if (!(detail::rebuild(e.forms[i], e.atoms, e.schedule) == d))
      return {false, "coordinates do not reproduce d(" + p + ", " + q + ")"};
    std::vector<TermTag> tags;
    try {
      tags = detail::tags_of(d, index);
    } catch (const std::domain_error&) {
      return {false, "term outside the registered families"};
    }
    if (tags != e.tags[i]) return {false, "registry tags disagree"};
    values.push_back(d);
  }
  if (!verify_witness(e.witness, e.atoms)) return {false, "witness traces fail"};
  if (expected == 1) {
    if (!detail::coords_nonzero(e.forms[0])) return {false, "distance is rational"};
    return {true, ""};
  }
  if (e.pairs[0] == e.pairs[1] ||
      e.pairs[0] == std::make_pair(e.pairs[1].second, e.pairs[1].first))
    return {false, "pairs coincide"};
  for (std::size_t i = 0; i < 2; ++i)
    if (auto r = detail::sum_shape(values[i], e.tags[i], reg); !r.ok) return r;
  if (values[0] == values[1]) return {false, "term multisets coincide"};
  if (!detail::independent(e.forms[0], e.forms[1])) return {false, "coordinates proportional"};
  return {true, ""};
}

}  // namespace srm
