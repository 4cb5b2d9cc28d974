// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "srm/certificate.hpp"
#include "srm/errors.hpp"
#include "srm/finite_metric.hpp"
#include "srm/product.hpp"
#include "srm/rigidify.hpp"
#include "srm/registry.hpp"
#include "srm/verify.hpp"

namespace srm {

/// Disjoint cover of the points of a metric; hubs[i] ∈ blocks[i]. Indices refer
/// to `points`.
struct Partition {
  std::vector<std::string> points;
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> hubs;

  std::size_t block_of(std::size_t point) const {
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (std::find(blocks[b].begin(), blocks[b].end(), point) != blocks[b].end()) return b;
    throw std::domain_error("point outside the partition");
  }

  void validate() const {
    if (hubs.size() != blocks.size()) throw std::invalid_argument("one hub per block required");
    std::vector<int> seen(points.size(), 0);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty()) throw std::invalid_argument("empty block");
      for (std::size_t p : blocks[b]) {
        if (p >= points.size()) throw std::invalid_argument("block index out of range");
        ++seen[p];
      }
      if (std::find(blocks[b].begin(), blocks[b].end(), hubs[b]) == blocks[b].end())
        throw std::invalid_argument("hub outside its block");
    }
    for (int c : seen)
      if (c != 1) throw std::invalid_argument("blocks do not form a disjoint cover");
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Greedy clustering: the first unassigned point seeds a block and absorbs
/// every unassigned point within bound/2 of it, so each block has diameter
/// <= bound. Hubs are the seeds.
inline Partition partition_by_diameter(const FiniteMetric& d, const Rational& bound,
                                       unsigned max_precision = kDefaultMaxPrecision) {
  if (bound <= 0) throw std::domain_error("partition bound must be positive");
  Partition p;
  p.points = d.points();
  const CodedReal radius(Rational(bound / 2));
  std::vector<bool> taken(d.size(), false);
  for (std::size_t seed = 0; seed < d.size(); ++seed) {
    if (taken[seed]) continue;
    taken[seed] = true;
    std::vector<std::size_t> block{seed};
    for (std::size_t y = seed + 1; y < d.size(); ++y)
      if (!taken[y] && certainly_le(d(seed, y), radius, max_precision)) {
        taken[y] = true;
        block.push_back(y);
      }
    p.blocks.push_back(std::move(block));
    p.hubs.push_back(seed);
  }
  return p;
}

/// D(x,y) = e_i(x,y) inside a block, e_i(x,p_i) + h(p_i,p_j) + e_j(p_j,y)
/// across blocks. The result is certified to be a metric.
inline FiniteMetric amalgamate(const Partition& partition,
                               const std::vector<FiniteMetric>& block_metrics,
                               const FiniteMetric& hub_metric,
                               unsigned max_precision = kDefaultMaxPrecision) {
  partition.validate();
  const std::size_t nb = partition.blocks.size();
  if (block_metrics.size() != nb) throw std::invalid_argument("one block metric per block");
  for (std::size_t b = 0; b < nb; ++b) {
    std::set<std::string> want, have(block_metrics[b].points().begin(),
                                     block_metrics[b].points().end());
    for (std::size_t p : partition.blocks[b]) want.insert(partition.points[p]);
    if (want != have) throw std::invalid_argument("block metric not defined exactly on its block");
  }
  std::set<std::string> hub_labels, hub_have(hub_metric.points().begin(), hub_metric.points().end());
  for (std::size_t h : partition.hubs) hub_labels.insert(partition.points[h]);
  if (hub_labels != hub_have) throw std::invalid_argument("hub metric not defined on the hubs");
  for (std::size_t a = 0; a < hub_metric.size(); ++a)
    for (std::size_t b = a + 1; b < hub_metric.size(); ++b)
      if (compare(hub_metric(a, b), CodedReal(0), max_precision) != Ordering::greater)
        throw std::domain_error("hub metric must be positive off the diagonal");

  const std::size_t n = partition.points.size();
  std::vector<std::size_t> owner(n);
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t p : partition.blocks[b]) owner[p] = b;
  auto local = [&](std::size_t b, std::size_t x, std::size_t y) -> const CodedReal& {
    const FiniteMetric& e = block_metrics[b];
    return e(e.index_of(partition.points[x]), e.index_of(partition.points[y]));
  };
  std::vector<std::vector<CodedReal>> m(n, std::vector<CodedReal>(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      const std::size_t bi = owner[x], bj = owner[y];
      if (bi == bj) {
        m[x][y] = m[y][x] = local(bi, x, y);
        continue;
      }
      const std::size_t pi = partition.hubs[bi], pj = partition.hubs[bj];
      const CodedReal& h = hub_metric(hub_metric.index_of(partition.points[pi]),
                                      hub_metric.index_of(partition.points[pj]));
      m[x][y] = m[y][x] = local(bi, x, pi) + h + local(bj, pj, y);
    }
  FiniteMetric D(partition.points, std::move(m));
  const Report r = is_metric(D, max_precision);
  if (r.verdict == Verdict::unresolved) throw unresolved_error("amalgamation: " + r.detail);
  if (!r.passed()) throw std::domain_error("amalgamation is not a metric: " + r.detail);
  return D;
}

namespace detail {

/// Largest |a(i,j) - b(i,j)| over the given index pairs, decided by compare.
inline CodedReal max_deviation(const FiniteMetric& a, const FiniteMetric& b,
                               const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                               unsigned max_precision) {
  CodedReal best(0);
  for (const auto& [i, j] : pairs) {
    const CodedReal dev = abs(a(i, j) - b(i, j), max_precision);
    if (!certainly_le(dev, best, max_precision)) best = dev;
  }
  return best;
}

}  // namespace detail

/// Checks sup |D - d| <= 4·epsilon + sup_P |d - h| with h = D on the hubs.
/// Blocks of d- or D-diameter above epsilon give precondition_failed.
inline Report sup_bound_check(const FiniteMetric& d, const FiniteMetric& D,
                              const Partition& partition, const Rational& epsilon,
                              unsigned max_precision = kDefaultMaxPrecision) {
  require_same_points(d, D);
  if (partition.points != d.points()) throw std::domain_error("partition on different points");
  partition.validate();
  Report r = detail::make_report("sup_bound", max_precision);
  const CodedReal eps(epsilon);
  try {
    for (const auto& block : partition.blocks)
      for (std::size_t a = 0; a < block.size(); ++a)
        for (std::size_t b = a + 1; b < block.size(); ++b) {
          const std::size_t x = block[a], y = block[b];
          if (!certainly_le(d(x, y), eps, max_precision) ||
              !certainly_le(D(x, y), eps, max_precision)) {
            detail::flag(r, Verdict::precondition_failed, {d.label(x), d.label(y)},
                         "block diameter exceeds epsilon");
            return r;
          }
        }
    std::vector<std::pair<std::size_t, std::size_t>> hub_pairs, all_pairs;
    for (std::size_t a = 0; a < partition.hubs.size(); ++a)
      for (std::size_t b = a + 1; b < partition.hubs.size(); ++b)
        hub_pairs.emplace_back(partition.hubs[a], partition.hubs[b]);
    for (std::size_t x = 0; x < d.size(); ++x)
      for (std::size_t y = x + 1; y < d.size(); ++y) all_pairs.emplace_back(x, y);
    const CodedReal rhs =
        CodedReal(Rational(4 * epsilon)) + detail::max_deviation(d, D, hub_pairs, max_precision);
    r.achieved = sup_distance(d, D);
    for (const auto& [x, y] : all_pairs) {
      const CodedReal dev = abs(D(x, y) - d(x, y), max_precision);
      if (!certainly_le(dev, rhs, max_precision)) {
        detail::flag(r, Verdict::fail, {d.label(x), d.label(y)}, "deviation exceeds the bound");
        return r;
      }
    }
  } catch (const unresolved_error& e) {
    r.verdict = Verdict::unresolved;
    r.detail = e.what();
    r.witnesses.push_back({});
  }
  return r;
}

/// Full output of the perturbation pipeline, checkable offline.
struct Certificate {
  FiniteMetric input;
  FiniteMetric metric;
  Rational epsilon;
  Partition partition;
  RegistrySnapshot registry;
  std::vector<IndependenceEntry> independence;
  Enclosure achieved;
  bool strongly_rigid = false;
};

struct PipelineOptions {
  unsigned long seed = 0;
  unsigned max_precision = kDefaultMaxPrecision;
};

struct PipelineResult {
  FiniteMetric metric;
  Certificate certificate;
};

namespace detail {

/// Least k with 2^{-k} <= eta.
inline unsigned long schedule_for(const Rational& eta) {
  unsigned long k = 0;
  while (pow2(-static_cast<long>(k)) > eta) ++k;
  return k;
}

/// Smallest i with 3·2^{-i-1} < radius.
inline unsigned long hub_index_for(const Rational& radius) {
  unsigned long i = 0;
  while (Rational(3) * pow2(-static_cast<long>(i) - 1) >= radius) ++i;
  return i;
}

/// Strongly rigid metric on the hubs, within eta of d there. Pair values sit in
/// eta/2 · (N + 2^{-N-1}, N + 2^{-N}) with N = ceil(2d/eta), so every triangle
/// stays strict.
inline FiniteMetric hub_metric(const FiniteMetric& d, const Partition& partition,
                               const Rational& eta, ValueRegistry& registry,
                               unsigned max_precision) {
  const std::size_t p = partition.hubs.size();
  std::vector<std::string> labels;
  for (std::size_t h : partition.hubs) labels.push_back(partition.points[h]);
  std::vector<std::vector<CodedReal>> m(p, std::vector<CodedReal>(p));
  const Rational half = eta / 2;
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b) {
      Rational units = d(partition.hubs[a], partition.hubs[b]).offset() / half;
      units.canonicalize();
      const Integer N = ceil(units);
      if (N < 1) throw std::domain_error("distinct hubs at distance zero");
      if (N > kMaxGridMultiple) throw resource_error("distance too large relative to epsilon");
      const long n = N.get_si();
      const Rational lo = half * (Rational(N) + pow2(-n - 1));
      const Rational hi = half * (Rational(N) + pow2(-n));
      const Rational radius = half * pow2(-n - 2);
      const Rational target = half * (Rational(N) + 3 * pow2(-n - 2));
      const unsigned long i = std::max(hub_index_for(radius), registry.next_hub_index());
      const CodedReal v = registry.hub_value(registry.schedule().k, i, target);
      if (compare(v, CodedReal(lo), max_precision) != Ordering::greater ||
          compare(v, CodedReal(hi), max_precision) != Ordering::less)
        throw unresolved_error("hub value not certified inside its interval");
      m[a][b] = m[b][a] = v;
    }
  return FiniteMetric(std::move(labels), std::move(m));
}

}  // namespace detail

/// Re-checks a certificate from its own contents: registry draws and hubs are
/// recomputed, the metric axioms, the epsilon bound and strong rigidity are
/// decided exactly, and every independence entry is verified and accounted
/// for.
inline CheckOutcome verify_certificate(const Certificate& c,
                                       unsigned max_precision = kDefaultMaxPrecision) {
  const RegistrySnapshot& reg = c.registry;
  std::set<Rational> values;
  for (const SemiMetricDraw& d : reg.draws) {
    if (d.gauge >= reg.gauge_count || !(d.a < d.b)) return {false, "malformed draw"};
    if (d.value != semi_metric_value(d.gauge, reg.seed, d.level, d.a, d.b))
      return {false, "draw does not match its gauge"};
    if (!values.insert(d.value).second) return {false, "repeated draw value"};
  }
  std::set<unsigned long> hub_indices;
  for (const HubAllocation& h : reg.hubs) {
    if (!hub_indices.insert(h.index).second) return {false, "repeated hub index"};
    const CodedReal s = tau(SemiMetricGauge(ValueRegistry::kReservedGauge, reg.seed),
                            ExponentSchedule{reg.k}, Word{Letter(0)}, Word{h.letter});
    if (!(s == h.s)) return {false, "hub basis term does not match the reserved gauge"};
    const long i = static_cast<long>(h.index);
    if (abs(Rational(h.p_value - h.target)) > pow2(-i - 1)) return {false, "hub offset too far"};
    if (h.q <= 0 || h.q * eval(h.s, kHubEnclosureIndex).hi > pow2(-i))
      return {false, "hub coefficient too large"};
  }
  if (c.metric.points() != c.input.points()) return {false, "metric and input points differ"};
  const Report metric = is_metric(c.metric, max_precision);
  if (!metric.passed()) return {false, "output is not a metric: " + metric.detail};
  const Report bound = sup_distance_at_most(c.input, c.metric, CodedReal(c.epsilon), max_precision);
  if (!bound.passed()) return {false, "sup bound: " + bound.detail};
  const Report sr = is_strongly_rigid(c.metric, max_precision);
  if (sr.passed() != c.strongly_rigid) return {false, "strong rigidity flag disagrees"};

  using Pair = std::pair<std::string, std::string>;
  auto key = [](Pair p) {
    if (p.second < p.first) std::swap(p.first, p.second);
    return p;
  };
  std::set<Pair> singles;
  std::set<std::pair<Pair, Pair>> doubles;
  for (const IndependenceEntry& e : c.independence) {
    const CheckOutcome o = verify_entry(e, c.metric, reg);
    if (!o.ok) return {false, "independence entry: " + o.reason};
    if (e.kind == IndependenceEntry::Kind::single) {
      singles.insert(key(e.pairs[0]));
    } else {
      Pair a = key(e.pairs[0]), b = key(e.pairs[1]);
      if (b < a) std::swap(a, b);
      doubles.emplace(a, b);
    }
  }
  const std::size_t n = c.metric.size();
  const std::size_t pairs = n * (n - 1) / 2;
  if (singles.size() != pairs) return {false, "missing single independence entries"};
  if (doubles.size() != pairs * (pairs - 1) / 2) return {false, "missing pair independence entries"};
  return {true, ""};
}

/// Perturbs a rational metric by at most epsilon into a metric whose distances
/// on distinct pairs are pairwise linearly independent over Q, together with
/// its certificate. eta = epsilon/5 bounds block diameters, block metrics and
/// the hub deviation.
inline PipelineResult rigidify_full(const FiniteMetric& d, const Rational& epsilon,
                                    const PipelineOptions& opt = {}) {
  if (d.size() < 2) throw degenerate_input("pipeline needs at least two points");
  if (epsilon <= 0) throw std::domain_error("epsilon must be positive");
  if (!d.is_rational()) throw std::domain_error("pipeline input must be rational");
  const Report input_ok = is_metric(d, opt.max_precision);
  if (!input_ok.passed()) throw std::invalid_argument("input is not a metric: " + input_ok.detail);

  Rational eta = epsilon / 5;
  eta.canonicalize();
  const unsigned long k = detail::schedule_for(eta);
  const ExponentSchedule schedule{k};
  ValueRegistry registry(k, opt.seed);
  const Partition partition = partition_by_diameter(d, eta, opt.max_precision);

  std::vector<FiniteMetric> blocks;
  for (const auto& block : partition.blocks) {
    const SemiMetricGauge gauge = registry.fresh_gauge();
    std::vector<std::string> labels;
    std::vector<std::vector<CodedReal>> m(block.size(), std::vector<CodedReal>(block.size()));
    for (std::size_t a = 0; a < block.size(); ++a) {
      labels.push_back(partition.points[block[a]]);
      for (std::size_t b = a + 1; b < block.size(); ++b)
        m[a][b] = m[b][a] = tau(gauge, schedule, Word{Letter(static_cast<unsigned long>(a))},
                                Word{Letter(static_cast<unsigned long>(b))});
    }
    blocks.emplace_back(std::move(labels), std::move(m));
  }
  const FiniteMetric hubs = detail::hub_metric(d, partition, eta, registry, opt.max_precision);
  FiniteMetric D = amalgamate(partition, blocks, hubs, opt.max_precision);

  const Report glue_bound = sup_bound_check(d, D, partition, eta, opt.max_precision);
  if (glue_bound.verdict == Verdict::unresolved) throw unresolved_error(glue_bound.detail);
  if (!glue_bound.passed())
    throw std::logic_error("amalgamation bound violated: " + glue_bound.detail);
  const Report within = sup_distance_at_most(d, D, CodedReal(epsilon), opt.max_precision);
  if (within.verdict == Verdict::unresolved) throw unresolved_error(within.detail);
  if (!within.passed()) throw std::logic_error("output farther than epsilon: " + within.detail);
  const Report sr = is_strongly_rigid(D, opt.max_precision);

  Certificate cert{d, D, epsilon, partition, registry.snapshot(), {}, sup_distance(d, D),
                   sr.passed()};
  const std::size_t n = D.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) pairs.emplace_back(x, y);
  auto labels_of = [&](std::pair<std::size_t, std::size_t> p) {
    return std::make_pair(D.label(p.first), D.label(p.second));
  };
  for (const auto& p : pairs) {
    auto e = single_independence_check(cert.registry, D(p.first, p.second));
    if (!e) throw std::logic_error("no independence certificate for a distance");
    e->pairs = {labels_of(p)};
    cert.independence.push_back(std::move(*e));
  }
  for (std::size_t a = 0; a < pairs.size(); ++a)
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      auto e = sum_independence_check(cert.registry, D(pairs[a].first, pairs[a].second),
                                      D(pairs[b].first, pairs[b].second));
      if (!e) throw std::logic_error("no independence certificate for a pair of distances");
      e->pairs = {labels_of(pairs[a]), labels_of(pairs[b])};
      cert.independence.push_back(std::move(*e));
    }
  return {D, std::move(cert)};
}

}  // namespace srm
