// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srm/compare.hpp"
#include "srm/errors.hpp"
#include "srm/finite_metric.hpp"

namespace srm {

enum class Verdict { pass, fail, unresolved, precondition_failed };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::unresolved: return "unresolved";
    case Verdict::precondition_failed: return "precondition_failed";
  }
  return "unresolved";
}

/// Outcome of one oracle. A fail or unresolved verdict names the offending
/// points in `witnesses`.
struct Report {
  std::string check;
  Verdict verdict = Verdict::pass;
  std::vector<std::vector<std::string>> witnesses;
  std::string detail;
  unsigned precision = kDefaultMaxPrecision;
  std::optional<Enclosure> achieved;

  bool passed() const { return verdict == Verdict::pass; }
};

/// Largest point count accepted by the isometry search.
inline constexpr std::size_t kIsometryLimit = 12;

namespace detail {

inline Report make_report(std::string check, unsigned precision) {
  Report r;
  r.check = std::move(check);
  r.precision = precision;
  return r;
}

inline void flag(Report& r, Verdict v, std::vector<std::string> witness, std::string detail) {
  r.verdict = v;
  r.witnesses.push_back(std::move(witness));
  r.detail = std::move(detail);
}

/// Sign of a + b - c.
inline Ordering triangle_slack(const CodedReal& a, const CodedReal& b, const CodedReal& c,
                               unsigned max_precision) {
  if (a.is_rational() && b.is_rational() && c.is_rational()) {
    const int s = sgn(Rational(a.offset() + b.offset() - c.offset()));
    return s < 0 ? Ordering::less : (s > 0 ? Ordering::greater : Ordering::equal);
  }
  LacunarySum sum(a);
  sum.add(b).add(c, Rational(-1));
  return sum.sign(max_precision);
}

/// Class id per entry: equal values share an id. Ids follow first occurrence
/// in row-major upper-triangle order; the diagonal has id 0.
inline std::vector<std::vector<std::size_t>> value_classes(const FiniteMetric& d) {
  const std::size_t n = d.size();
  std::vector<std::vector<std::size_t>> id(n, std::vector<std::size_t>(n, 0));
  std::vector<const CodedReal*> reps{nullptr};
  std::map<Rational, std::size_t> rational_ids;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const CodedReal& v = d(i, j);
      std::size_t found = 0;
      if (v.is_rational()) {
        if (v.offset() == 0) {
          found = 0;
        } else if (auto it = rational_ids.find(v.offset()); it != rational_ids.end()) {
          found = it->second;
        } else {
          found = reps.size();
          reps.push_back(&v);
          rational_ids.emplace(v.offset(), found);
        }
      } else {
        for (std::size_t c = 1; c < reps.size() && found == 0; ++c)
          if (!reps[c]->is_rational() && equals(*reps[c], v)) found = c;
        if (found == 0) {
          found = reps.size();
          reps.push_back(&v);
        }
      }
      id[i][j] = id[j][i] = found;
    }
  return id;
}

}  // namespace detail

/// Zero diagonal, symmetry, positivity and every triangle inequality
/// d(x,y) <= d(x,z) + d(z,y); the strict variant demands < for distinct x,y,z.
inline Report check_triangles(const FiniteMetric& d, bool strict,
                              unsigned max_precision = kDefaultMaxPrecision) {
  Report r = detail::make_report(strict ? "strict" : "metric", max_precision);
  const std::size_t n = d.size();
  const auto& L = d.points();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(d(i, i) == CodedReal(0))) {
      detail::flag(r, Verdict::fail, {L[i]}, "nonzero diagonal");
      return r;
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!equals(d(i, j), d(j, i))) {
        detail::flag(r, Verdict::fail, {L[i], L[j]}, "asymmetric entry");
        return r;
      }
      const Ordering o = compare(d(i, j), CodedReal(0), max_precision);
      if (o == Ordering::unresolved) {
        detail::flag(r, Verdict::unresolved, {L[i], L[j]}, "positivity unresolved");
        return r;
      }
      if (o != Ordering::greater) {
        detail::flag(r, Verdict::fail, {L[i], L[j]}, "non-positive distance");
        return r;
      }
    }
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        const Ordering o = detail::triangle_slack(d(x, z), d(z, y), d(x, y), max_precision);
        if (o == Ordering::unresolved) {
          detail::flag(r, Verdict::unresolved, {L[x], L[y], L[z]}, "triangle unresolved");
          return r;
        }
        if (o == Ordering::less || (strict && o == Ordering::equal)) {
          detail::flag(r, Verdict::fail, {L[x], L[y], L[z]},
                       o == Ordering::less ? "d(x,y) > d(x,z) + d(z,y)"
                                           : "d(x,y) = d(x,z) + d(z,y)");
          return r;
        }
      }
  return r;
}

inline Report is_metric(const FiniteMetric& d, unsigned max_precision = kDefaultMaxPrecision) {
  return check_triangles(d, false, max_precision);
}

inline Report is_strict_triangle(const FiniteMetric& d,
                                 unsigned max_precision = kDefaultMaxPrecision) {
  return check_triangles(d, true, max_precision);
}

inline void require_same_points(const FiniteMetric& d, const FiniteMetric& e) {
  if (d.points() != e.points()) throw std::domain_error("metrics are defined on different points");
}

/// Enclosure of max |d - e| over all pairs, from eval at index N.
inline Enclosure sup_distance(const FiniteMetric& d, const FiniteMetric& e,
                              unsigned long N = 8) {
  require_same_points(d, e);
  Enclosure out{Rational(0), Rational(0)};
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      const Enclosure diff = eval(d(i, j) - e(i, j), N);
      Enclosure a = diff;
      if (diff.hi <= 0) {
        a = {Rational(-diff.hi), Rational(-diff.lo)};
      } else if (diff.lo < 0) {
        a = {Rational(0), std::max(Rational(-diff.lo), diff.hi)};
      }
      if (a.lo > out.lo) out.lo = a.lo;
      if (a.hi > out.hi) out.hi = a.hi;
    }
  return out;
}

/// Exact check of |d(x,y) - e(x,y)| <= bound for every pair.
inline Report sup_distance_at_most(const FiniteMetric& d, const FiniteMetric& e,
                                   const CodedReal& bound,
                                   unsigned max_precision = kDefaultMaxPrecision) {
  require_same_points(d, e);
  Report r = detail::make_report("sup_bound", max_precision);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      const CodedReal diff = d(i, j) - e(i, j);
      for (const CodedReal& side : {diff, CodedReal(-diff)}) {
        const Ordering o = compare(side, bound, max_precision);
        if (o == Ordering::unresolved) {
          detail::flag(r, Verdict::unresolved, {d.label(i), d.label(j)}, "bound unresolved");
          return r;
        }
        if (o == Ordering::greater) {
          detail::flag(r, Verdict::fail, {d.label(i), d.label(j)}, "deviation exceeds bound");
          return r;
        }
      }
    }
  return r;
}

/// Every positive value occurs for exactly one unordered pair.
inline Report is_strongly_rigid(const FiniteMetric& d,
                                unsigned max_precision = kDefaultMaxPrecision) {
  Report r = detail::make_report("sr", max_precision);
  const auto id = detail::value_classes(d);
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> owner;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (id[i][j] == 0) continue;
      auto [it, fresh] = owner.emplace(id[i][j], std::make_pair(i, j));
      if (!fresh) {
        const auto [u, v] = it->second;
        detail::flag(r, Verdict::fail, {d.label(u), d.label(v), d.label(i), d.label(j)},
                     "two pairs share a positive distance");
        return r;
      }
    }
  return r;
}

/// All distance-preserving permutations; perm[i] is the image of point i.
inline std::vector<std::vector<std::size_t>> isometry_group(const FiniteMetric& d) {
  const std::size_t n = d.size();
  if (n > kIsometryLimit) throw resource_error("isometry search limited to 12 points");
  const auto id = detail::value_classes(d);
  std::vector<std::vector<std::size_t>> fingerprint(n);
  for (std::size_t i = 0; i < n; ++i) {
    fingerprint[i] = id[i];
    std::sort(fingerprint[i].begin(), fingerprint[i].end());
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> perm(n);
  std::vector<bool> used(n, false);
  auto extend = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      out.push_back(perm);
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || fingerprint[i] != fingerprint[j]) continue;
      bool ok = true;
      for (std::size_t prev = 0; prev < i && ok; ++prev) ok = id[i][prev] == id[j][perm[prev]];
      if (!ok) continue;
      used[j] = true;
      perm[i] = j;
      self(self, i + 1);
      used[j] = false;
    }
  };
  extend(extend, 0);
  return out;
}

inline Report is_rigid(const FiniteMetric& d) {
  Report r = detail::make_report("rigid", 0);
  const auto group = isometry_group(d);
  for (const auto& perm : group) {
    bool identity = true;
    for (std::size_t i = 0; i < perm.size(); ++i) identity = identity && perm[i] == i;
    if (identity) continue;
    std::vector<std::string> w;
    for (std::size_t i = 0; i < perm.size(); ++i) w.push_back(d.label(perm[i]));
    detail::flag(r, Verdict::fail, std::move(w), "non-identity isometry (images of points in order)");
    r.detail += "; group order " + std::to_string(group.size());
    return r;
  }
  return r;
}

/// Searches x, y, u, v with d(x,y) = d(u,v) >= 2^{-m}, d(x,u) + d(y,v) >= 2^{-m}
/// and d(x,v) + d(u,y) >= 2^{-m}. The check passes when no such quadruple
/// exists (d lies in the complement G_m); a fail names the quadruple.
inline Report lnm_membership(const FiniteMetric& d, unsigned long m,
                             unsigned max_precision = kDefaultMaxPrecision) {
  Report r = detail::make_report("lnm", max_precision);
  const std::size_t n = d.size();
  const CodedReal threshold(pow2(-static_cast<long>(m)));
  const auto id = detail::value_classes(d);
  auto at_least = [&](const CodedReal& v) -> std::optional<bool> {
    const Ordering o = compare(v, threshold, max_precision);
    if (o == Ordering::unresolved) return std::nullopt;
    return o != Ordering::less;
  };
  std::vector<std::vector<std::optional<bool>>> big(n, std::vector<std::optional<bool>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) big[i][j] = at_least(d(i, j));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
          if (u == v || id[x][y] != id[u][v]) continue;
          const std::vector<std::string> quad{d.label(x), d.label(y), d.label(u), d.label(v)};
          if (!big[x][y]) {
            detail::flag(r, Verdict::unresolved, quad, "threshold comparison unresolved");
            return r;
          }
          if (!*big[x][y]) continue;
          const auto c1 = at_least(d(x, u) + d(y, v));
          const auto c2 = at_least(d(x, v) + d(u, y));
          if (!c1 || !c2) {
            detail::flag(r, Verdict::unresolved, quad, "cross sum unresolved");
            return r;
          }
          if (*c1 && *c2) {
            detail::flag(r, Verdict::fail, quad, "member of L_m");
            return r;
          }
        }
    }
  return r;
}

/// Levels m = 0 .. ceil(-log2 δ) + 1 where δ is a lower bound for the least
/// positive distance; beyond them membership no longer changes.
inline unsigned long lnm_level_horizon(const FiniteMetric& d) {
  std::optional<Rational> least;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      const Rational lo = eval(d(i, j), 8).lo;
      if (lo <= 0) {
        if (d(i, j).is_rational()) continue;
        throw unresolved_error("no positive lower bound for a coded distance");
      }
      if (!least || lo < *least) least = lo;
    }
  if (!least) return 0;
  unsigned long m = 0;
  while (pow2(-static_cast<long>(m)) > *least) ++m;
  return m + 1;
}

/// Strong rigidity through the quadruple characterization: pass iff d lies
/// outside L_m for every level up to the horizon.
inline Report strongly_rigid_by_lnm(const FiniteMetric& d,
                                    unsigned max_precision = kDefaultMaxPrecision) {
  const unsigned long horizon = lnm_level_horizon(d);
  for (unsigned long m = 0; m <= horizon; ++m) {
    Report r = lnm_membership(d, m, max_precision);
    if (!r.passed()) {
      r.check = "sr_by_lnm";
      r.detail += " at m = " + std::to_string(m);
      return r;
    }
  }
  return detail::make_report("sr_by_lnm", max_precision);
}

/// x -> d(x, xi) is injective.
inline Report distance_embedding_check(const FiniteMetric& d, const std::string& xi) {
  Report r = detail::make_report("embed", 0);
  const std::size_t c = d.index_of(xi);
  for (std::size_t x = 0; x < d.size(); ++x)
    for (std::size_t y = x + 1; y < d.size(); ++y)
      if (equals(d(x, c), d(y, c))) {
        detail::flag(r, Verdict::fail, {d.label(x), d.label(y), xi}, "equidistant from base point");
        return r;
      }
  return r;
}

}  // namespace srm
