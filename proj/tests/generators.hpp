// SPDX-License-Identifier: Apache-2.0
// Hand-rolled random generators shared by the property tests.
#pragma once

#include <random>
#include <vector>

#include "srm/coded_real.hpp"
#include "srm/finite_metric.hpp"

namespace srm::testing {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

/// p/q with 0 <= p/q <= max_value and q <= max_den.
inline Rational random_rational(Rng& rng, long max_value, long max_den) {
  const long den = uniform(rng, 1, max_den);
  Rational r(uniform(rng, 0, max_value * den), den);
  r.canonicalize();
  return r;
}

inline IntervalSet random_interval_set(Rng& rng, long levels, long max_den, int max_blocks) {
  std::vector<Block> blocks;
  const int count = static_cast<int>(uniform(rng, 1, max_blocks));
  for (int i = 0; i < count; ++i) {
    Rational a = random_rational(rng, levels, max_den);
    Rational b = random_rational(rng, levels, max_den);
    if (a == b) b += Rational(1, max_den);
    if (b < a) std::swap(a, b);
    blocks.push_back({a, b});
  }
  return IntervalSet(std::move(blocks));
}

inline CodedReal random_coded(Rng& rng, long levels, long max_den, int max_terms) {
  std::vector<Term> terms;
  const int count = static_cast<int>(uniform(rng, 0, max_terms));
  for (int i = 0; i < count; ++i) {
    Rational c(uniform(rng, -4, 4), uniform(rng, 1, 3));
    c.canonicalize();
    terms.push_back({c, ExponentSchedule{static_cast<unsigned long>(uniform(rng, 0, 2))},
                     random_interval_set(rng, levels, max_den, 2)});
  }
  Rational offset(uniform(rng, -2, 2), uniform(rng, 1, 4));
  offset.canonicalize();
  return CodedReal(offset, std::move(terms));
}

/// Shortest-path closure of random positive edge weights: always a metric,
/// often with repeated distances and tight triangles.
inline FiniteMetric random_rational_metric(Rng& rng, std::size_t n, long max_value = 6,
                                           long max_den = 4) {
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational w = random_rational(rng, max_value, max_den);
      if (w == 0) w = Rational(1, max_den);
      m[i][j] = m[j][i] = w;
    }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (m[i][k] + m[k][j] < m[i][j]) m[i][j] = m[i][k] + m[k][j];
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  return FiniteMetric::from_rationals(std::move(labels), m);
}

}  // namespace srm::testing
