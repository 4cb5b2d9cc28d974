// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "srm/coded_real.hpp"
#include "srm/compare.hpp"

namespace srm {

/// Labeled points with a symmetric, zero-diagonal matrix of exact values.
/// Metric axioms beyond symmetry are checked by the verify module, so that
/// non-metrics can still be represented and reported on.
class FiniteMetric {
 public:
  FiniteMetric() = default;

  FiniteMetric(std::vector<std::string> points, std::vector<std::vector<CodedReal>> matrix)
      : points_(std::move(points)), matrix_(std::move(matrix)) {
    const std::size_t n = points_.size();
    if (std::set<std::string>(points_.begin(), points_.end()).size() != n)
      throw std::invalid_argument("duplicate point labels");
    if (matrix_.size() != n) throw std::invalid_argument("matrix row count mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      if (matrix_[i].size() != n) throw std::invalid_argument("matrix is not square");
      if (!(matrix_[i][i] == CodedReal(0)))
        throw std::invalid_argument("nonzero diagonal at " + points_[i]);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (!equals(matrix_[i][j], matrix_[j][i]))
          throw std::invalid_argument("asymmetric entry at (" + points_[i] + ", " + points_[j] + ")");
  }

  static FiniteMetric from_rationals(std::vector<std::string> points,
                                     const std::vector<std::vector<Rational>>& matrix) {
    std::vector<std::vector<CodedReal>> coded;
    for (const auto& row : matrix) coded.emplace_back(row.begin(), row.end());
    return FiniteMetric(std::move(points), std::move(coded));
  }

  std::size_t size() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& label(std::size_t i) const { return points_.at(i); }
  const CodedReal& operator()(std::size_t i, std::size_t j) const { return matrix_[i][j]; }
  const std::vector<std::vector<CodedReal>>& matrix() const { return matrix_; }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (points_[i] == label) return i;
    throw std::domain_error("unknown point '" + label + "'");
  }

  bool is_rational() const {
    for (const auto& row : matrix_)
      for (const CodedReal& v : row)
        if (!v.is_rational()) return false;
    return true;
  }

  /// Submetric on the given indices, in the given order.
  FiniteMetric restrict(const std::vector<std::size_t>& idx) const {
    std::vector<std::string> labels;
    std::vector<std::vector<CodedReal>> m;
    for (std::size_t a : idx) {
      labels.push_back(points_.at(a));
      std::vector<CodedReal> row;
      for (std::size_t b : idx) row.push_back(matrix_[a][b]);
      m.push_back(std::move(row));
    }
    return FiniteMetric(std::move(labels), std::move(m));
  }

  /// Structural equality of labels and normal forms.
  friend bool operator==(const FiniteMetric& a, const FiniteMetric& b) {
    return a.points_ == b.points_ && a.matrix_ == b.matrix_;
  }

 private:
  std::vector<std::string> points_;
  std::vector<std::vector<CodedReal>> matrix_;
};

}  // namespace srm
