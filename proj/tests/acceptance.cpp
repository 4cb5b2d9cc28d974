// SPDX-License-Identifier: Apache-2.0
// Acceptance gate: ten criteria, one PASS/FAIL line each, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "srm/enumeration.hpp"
#include "srm/glue.hpp"
#include "srm/json_io.hpp"
#include "srm/rigidify.hpp"
#include "srm/verify.hpp"

namespace {

using namespace srm;
using testing::Rng;
using testing::uniform;

struct Outcome {
  bool ok = true;
  std::string detail;
};

/// Strongly rigid outputs collected by criteria 2 and 6 for criteria 7 and 9.
std::vector<FiniteMetric> g_rigid_outputs;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

FiniteMetric random_metric(Rng& rng, std::size_t n) {
  const long den = uniform(rng, 1, 6);
  return testing::random_rational_metric(rng, n, 6, den);
}

/// Rational strictly inside (lo, hi).
Rational sample_inside(Rng& rng, const Rational& lo, const Rational& hi) {
  const long steps = 1 << 20;
  const long t = uniform(rng, 1, steps - 1);
  Rational r = lo + (hi - lo) * Rational(t, steps);
  r.canonicalize();
  return r;
}

Outcome interval_sum_oracle() {
  Rng rng(101);
  std::vector<std::vector<Rational>> samples(13);
  for (long N = 1; N <= 12; ++N) {
    const Rational lo = Rational(N) + pow2(-N - 1), hi = Rational(N) + pow2(-N);
    samples[N].push_back(sample_inside(rng, lo, lo + pow2(-N - 30)));  // near the low end
    samples[N].push_back(sample_inside(rng, hi - pow2(-N - 30), hi));  // near the high end
    while (samples[N].size() < 10) samples[N].push_back(sample_inside(rng, lo, hi));
  }
  long triples = 0, checks = 0, violations = 0;
  for (long a = 1; a <= 12; ++a)
    for (long b = 1; b <= 12; ++b)
      for (long c = 1; c <= 12; ++c) {
        if (a > b + c) continue;
        ++triples;
        for (const Rational& m1 : samples[a])
          for (const Rational& m2 : samples[b])
            for (const Rational& m3 : samples[c]) {
              ++checks;
              if (!(m1 < m2 + m3)) ++violations;
            }
      }
  return {violations == 0, std::to_string(triples) + " triples, " + std::to_string(checks) +
                               " comparisons, " + std::to_string(violations) + " violations"};
}

Outcome discrete_perturbation_suite() {
  Rng rng(202);
  int failures = 0;
  std::string first;
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<std::size_t>(uniform(rng, 2, 12));
    const FiniteMetric d = random_metric(rng, n);
    Rational eps(uniform(rng, 1, 31), 16);
    eps.canonicalize();
    const FiniteMetric e = perturb_strongly_rigid(d, eps, static_cast<unsigned long>(t));
    const bool ok = is_metric(e).passed() && is_strict_triangle(e).passed() &&
                    is_strongly_rigid(e).passed() &&
                    sup_distance_at_most(d, e, CodedReal(eps)).passed();
    if (!ok && failures++ == 0) first = "instance " + std::to_string(t);
    if (ok) g_rigid_outputs.push_back(e);
  }
  return {failures == 0, "100 metrics, " + std::to_string(failures) + " failures " + first};
}

Outcome tau_suite() {
  const ExponentSchedule k{3};
  const FiniteMetric d = product_metric(SemiMetricGauge(1, 0), k, 3, 3);
  std::vector<CodedReal> values;
  int over = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      values.push_back(d(i, j));
      if (eval(d(i, j), 8).hi > Rational(1, 8)) ++over;
    }
  int collisions = 0;
  for (std::size_t a = 0; a < values.size(); ++a)
    for (std::size_t b = a + 1; b < values.size(); ++b)
      if (equals(values[a], values[b])) ++collisions;
  const Report metric = is_metric(d);
  std::ostringstream s;
  s << values.size() << " distances, " << collisions << " collisions, " << over
    << " enclosures above 1/8, triangles " << to_string(metric.verdict);
  return {values.size() == 351 && collisions == 0 && over == 0 && metric.passed(), s.str()};
}

Outcome prefix_bounds() {
  Rng rng(404);
  long implications = 0, violations = 0, unresolved = 0;
  for (int t = 0; t < 500; ++t) {
    const auto len = static_cast<std::size_t>(uniform(rng, 1, 6));
    const long alphabet = uniform(rng, 2, 5);
    const ExponentSchedule k{static_cast<unsigned long>(uniform(rng, 0, 4))};
    const SemiMetricGauge g(static_cast<unsigned long>(uniform(rng, 1, 5)), 0);
    Word x(len), y(len);
    for (std::size_t i = 0; i < len; ++i) {
      x[i] = uniform(rng, 0, alphabet - 1);
      y[i] = uniform(rng, 0, alphabet - 1);
    }
    const CodedReal s = sigma(g, k, x, y);
    for (unsigned long m = 0; m < len; ++m) {
      const bool agree = std::equal(x.begin(), x.begin() + static_cast<long>(m) + 1, y.begin());
      LacunarySum below(s);
      below.add_gamma(Rational(-1), k, level_minimum(m));
      const Ordering a = below.sign();
      LacunarySum upper(s);
      upper.add_gamma(Rational(-4), k, level_minimum(m + 1));
      const Ordering b = upper.sign();
      implications += 2;
      if (a == Ordering::unresolved || b == Ordering::unresolved) {
        ++unresolved;
        continue;
      }
      if (a != Ordering::greater && !agree) ++violations;
      if (agree && b == Ordering::greater) ++violations;
    }
  }
  return {violations == 0 && unresolved == 0,
          "500 pairs, " + std::to_string(implications) + " implications, " +
              std::to_string(violations) + " violations, " + std::to_string(unresolved) +
              " unresolved"};
}

Outcome amalgamation_suite() {
  Rng rng(505);
  int failures = 0;
  std::string first;
  for (int t = 0; t < 50; ++t) {
    const auto n = static_cast<std::size_t>(uniform(rng, 2, 8));
    const FiniteMetric d = random_metric(rng, n);
    Rational eps(uniform(rng, 1, 12), 4);
    eps.canonicalize();
    const Partition p = partition_by_diameter(d, eps);
    std::vector<FiniteMetric> blocks;
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
      if (t % 2 == 0) {
        blocks.push_back(d.restrict(p.blocks[b]));
        continue;
      }
      unsigned long kk = 0;
      while (pow2(-static_cast<long>(kk)) > eps) ++kk;
      const SemiMetricGauge g(b + 1, static_cast<unsigned long>(t));
      std::vector<std::string> labels;
      const std::size_t m = p.blocks[b].size();
      std::vector<std::vector<CodedReal>> mat(m, std::vector<CodedReal>(m));
      for (std::size_t a = 0; a < m; ++a) {
        labels.push_back(p.points[p.blocks[b][a]]);
        for (std::size_t c = a + 1; c < m; ++c)
          mat[a][c] = mat[c][a] = tau(g, ExponentSchedule{kk}, {Letter(a)}, {Letter(c)});
      }
      blocks.emplace_back(std::move(labels), std::move(mat));
    }
    FiniteMetric hub = d.restrict(p.hubs);
    if (hub.size() >= 2 && t % 3 != 0) hub = perturb_strongly_rigid(hub, Rational(1, 2), 7);
    const FiniteMetric D = amalgamate(p, blocks, hub);
    bool restriction = true;
    for (std::size_t b = 0; b < p.blocks.size(); ++b)
      for (std::size_t x : p.blocks[b])
        for (std::size_t y : p.blocks[b]) {
          const FiniteMetric& e = blocks[b];
          restriction = restriction && D(x, y) == e(e.index_of(p.points[x]), e.index_of(p.points[y]));
        }
    const Report r = sup_bound_check(d, D, p, eps);
    if ((!restriction || !r.passed()) && failures++ == 0)
      first = "instance " + std::to_string(t) + ": " + to_string(r.verdict) + " " + r.detail;
  }
  return {failures == 0, "50 amalgamations, " + std::to_string(failures) + " failures " + first};
}

Outcome pipeline_suite() {
  Rng rng(606);
  const Rational budgets[] = {Rational(1, 4), Rational(1, 2), Rational(1)};
  int failures = 0;
  long entries = 0;
  std::string first;
  for (int t = 0; t < 50; ++t) {
    const auto n = static_cast<std::size_t>(uniform(rng, 2, 10));
    const FiniteMetric d = random_metric(rng, n);
    const Rational eps = budgets[t % 3];
    std::string why;
    try {
      const PipelineResult out = rigidify_full(d, eps, {static_cast<unsigned long>(t)});
      // Re-check from the serialized certificate only.
      const Certificate cert =
          io::certificate_from_json(io::Json::parse(io::to_json(out.certificate).dump()));
      const CheckOutcome c = verify_certificate(cert);
      const std::size_t pairs = n * (n - 1) / 2;
      const bool complete = cert.independence.size() == pairs + pairs * (pairs - 1) / 2;
      entries += static_cast<long>(cert.independence.size());
      if (!c.ok) why = c.reason;
      else if (!complete) why = "incomplete certificate";
      else if (!cert.strongly_rigid) why = "not strongly rigid";
      else if (!(cert.achieved.hi <= eps)) why = "enclosure above epsilon";
      if (why.empty()) g_rigid_outputs.push_back(out.metric);
    } catch (const std::exception& e) {
      why = e.what();
    }
    if (!why.empty() && failures++ == 0) first = "instance " + std::to_string(t) + ": " + why;
  }
  return {failures == 0, "50 metrics, " + std::to_string(entries) + " certificate entries, " +
                             std::to_string(failures) + " failures " + first};
}

Outcome rigidity_chain() {
  long checked = 0, bad = 0;
  for (const FiniteMetric& d : g_rigid_outputs) {
    if (d.size() < 3) continue;
    ++checked;
    if (isometry_group(d).size() != 1) ++bad;
  }
  return {bad == 0 && checked > 0,
          std::to_string(checked) + " strongly rigid outputs with n >= 3, " + std::to_string(bad) +
              " with nontrivial isometries"};
}

Outcome quadruple_equivalence() {
  Rng rng(808);
  int disagreements = 0, rigid = 0;
  for (int t = 0; t < 200; ++t) {
    const auto n = static_cast<std::size_t>(uniform(rng, 2, 8));
    const long den = t % 4 == 0 ? 64 : uniform(rng, 1, 4);
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        Rational v(uniform(rng, 1, 8 * den), den);
        v.canonicalize();
        m[i][j] = m[j][i] = v;
      }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    const FiniteMetric d = FiniteMetric::from_rationals(labels, m);
    const bool sr = is_strongly_rigid(d).passed();
    rigid += sr;
    if (sr != strongly_rigid_by_lnm(d).passed()) ++disagreements;
  }
  return {disagreements == 0, "200 matrices (" + std::to_string(rigid) + " strongly rigid), " +
                                  std::to_string(disagreements) + " disagreements"};
}

Outcome embedding_check() {
  long checks = 0, bad = 0;
  for (const FiniteMetric& d : g_rigid_outputs)
    for (const std::string& xi : d.points()) {
      ++checks;
      if (!distance_embedding_check(d, xi).passed()) ++bad;
    }
  return {bad == 0 && checks > 0,
          std::to_string(checks) + " base points, " + std::to_string(bad) + " non-injective"};
}

Outcome enumeration_property() {
  std::set<Rational> seen;
  bool ok = true;
  for (long i = 0; i < 10000; ++i) {
    const Rational q = enumerate_rationals(Integer(i));
    ok = ok && q >= 0 && seen.insert(q).second && rational_index(q) == i;
  }
  // Brute-force first hits of each integer level among the scanned prefix.
  std::vector<long> first_hit(40, -1);
  for (long i = 0; i < 10000; ++i) {
    const long m = floor(enumerate_rationals(Integer(i))).get_si();
    if (m < 40 && first_hit[m] < 0) first_hit[m] = i;
  }
  Integer prev = -1;
  for (unsigned long m = 0; m <= 20; ++m) {
    const Integer l = level_minimum(m);
    ok = ok && enumerate_rationals(l) == Rational(Integer(m)) && l > prev;
    if (l < 10000) ok = ok && first_hit[m] == l.get_si();
    prev = l;
  }
  return {ok, "10^4 indices bijective with inverse, first hits at 2^m - 1 for m <= 20"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"interval sums M1 < M2 + M3", 5, interval_sum_oracle},
      {"discrete strongly rigid perturbation", 60, discrete_perturbation_suite},
      {"tau metric on 27 words", 120, tau_suite},
      {"prefix bounds for sigma", 60, prefix_bounds},
      {"amalgamation restriction and sup bound", 30, amalgamation_suite},
      {"independence pipeline end to end", 600, pipeline_suite},
      {"strongly rigid implies rigid", 60, rigidity_chain},
      {"strong rigidity vs quadruple levels", 60, quadruple_equivalence},
      {"distance embedding injective", 10, embedding_check},
      {"enumeration property (M)", 1, enumeration_property},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    const bool in_time = secs < criteria[i].limit_seconds;
    const bool pass = o.ok && in_time;
    failed += !pass;
    std::printf("criterion %2zu %-40s %s  %.2fs/%gs  %s%s\n", i + 1, criteria[i].name,
                pass ? "PASS" : "FAIL", secs, criteria[i].limit_seconds, o.detail.c_str(),
                in_time ? "" : " (over time limit)");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
