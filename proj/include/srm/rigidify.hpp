// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <vector>

#include "srm/dense_stream.hpp"
#include "srm/errors.hpp"
#include "srm/finite_metric.hpp"

namespace srm {

/// Largest grid multiple accepted by the perturbation; larger ones would need
/// million-bit dyadic denominators.
inline constexpr unsigned long kMaxGridMultiple = 1ul << 20;

/// e(x,y) = eta · ceil(d(x,y) / eta) off the diagonal.
inline FiniteMetric snap_to_grid(const FiniteMetric& d, const Rational& eta) {
  if (eta <= 0) throw std::domain_error("grid step must be positive");
  if (!d.is_rational()) throw std::domain_error("snapping needs rational entries");
  const std::size_t n = d.size();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational ratio = d(i, j).offset() / eta;
      ratio.canonicalize();
      m[i][j] = m[j][i] = eta * ceil(ratio);
    }
  return FiniteMetric::from_rationals(d.points(), m);
}

/// Stream element inside (N + 2^{-N-1}, N + 2^{-N}). That interval is itself the
/// dyadic base interval of exponent N+1 and numerator N·2^{N+1} + 1.
inline Rational pick_interval_value(unsigned long N, const DenseStream& stream) {
  if (N < 1) throw std::domain_error("interval index must be >= 1");
  if (N > kMaxGridMultiple) throw resource_error("interval index too large");
  const DyadicInterval u{N + 1, Integer(N) * pow2_integer(N + 1) + 1};
  return stream.element_in(u);
}

/// Discrete strongly rigid perturbation with eta = epsilon / 2. Pair alpha, in
/// lexicographic order, takes its value from stream alpha, so all values are
/// distinct; each lies in eta·(N + 2^{-N-1}, N + 2^{-N}) with N = ceil(d/eta),
/// which keeps every triangle strict.
inline FiniteMetric perturb_strongly_rigid(const FiniteMetric& d, const Rational& epsilon,
                                           unsigned long seed = 0) {
  if (d.size() < 2) throw degenerate_input("perturbation needs at least two points");
  if (epsilon <= 0) throw std::domain_error("epsilon must be positive");
  Rational eta = epsilon / 2;
  eta.canonicalize();
  const FiniteMetric grid = snap_to_grid(d, eta);
  const std::size_t n = d.size();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
  unsigned long alpha = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j, ++alpha) {
      Rational units = grid(i, j).offset() / eta;
      units.canonicalize();
      const Integer u = units.get_num();
      if (u < 1) throw std::domain_error("input distance must be positive off the diagonal");
      if (u > kMaxGridMultiple) throw resource_error("distance too large relative to epsilon");
      const Rational w = pick_interval_value(u.get_ui(), DenseStream(alpha, seed));
      m[i][j] = m[j][i] = eta * w;
    }
  return FiniteMetric::from_rationals(d.points(), m);
}

}  // namespace srm
