// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "srm/coded_real.hpp"
#include "srm/dense_stream.hpp"
#include "srm/finite_metric.hpp"

namespace srm {

using Letter = Integer;
using Word = std::vector<Letter>;

inline Integer cantor_pair(const Integer& a, const Integer& b) {
  const Integer s = a + b;
  return s * (s + 1) / 2 + b;
}

/// f_n on prefixes of length n+1: identity for n = 0, otherwise the left fold
/// of Cantor pairing over the letters.
inline Integer pair_encode(std::size_t n, const Word& prefix) {
  if (prefix.size() != n + 1) throw std::domain_error("prefix length must be n + 1");
  Integer acc = prefix[0];
  for (std::size_t j = 1; j < prefix.size(); ++j) acc = cantor_pair(acc, prefix[j]);
  return acc;
}

/// Slot 2n holds x_n, slot 2n+1 holds f_n(x_0..x_n).
inline Word prism(const Word& x) {
  Word out;
  out.reserve(2 * x.size());
  Word prefix;
  for (std::size_t n = 0; n < x.size(); ++n) {
    prefix.push_back(x[n]);
    out.push_back(x[n]);
    out.push_back(pair_encode(n, prefix));
  }
  return out;
}

/// One recorded semi-metric value r_level({a, b}) of a gauge, a < b.
struct SemiMetricDraw {
  unsigned long gauge = 0;
  unsigned long level = 0;
  Letter a, b;
  Rational value;
};

/// Synchronized memo of drawn semi-metric values, shared by all gauges of one
/// registry. Values are unique across the whole log.
class DrawLog {
 public:
  Rational lookup_or_insert(const SemiMetricDraw& draw) {
    std::lock_guard<std::mutex> lock(mu_);
    const Key key{draw.gauge, draw.level, draw.a, draw.b};
    if (auto it = by_key_.find(key); it != by_key_.end()) return it->second;
    if (by_value_.count(draw.value)) throw std::logic_error("semi-metric value drawn twice");
    by_key_.emplace(key, draw.value);
    by_value_.emplace(draw.value, draw);
    return draw.value;
  }

  std::optional<SemiMetricDraw> find_value(const Rational& v) const {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = by_value_.find(v); it != by_value_.end()) return it->second;
    return std::nullopt;
  }

  /// Draws ordered by (gauge, level, a, b).
  std::vector<SemiMetricDraw> draws() const {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<SemiMetricDraw> out;
    for (const auto& [key, value] : by_key_) out.push_back(by_value_.at(value));
    return out;
  }

 private:
  using Key = std::tuple<unsigned long, unsigned long, Letter, Letter>;
  mutable std::mutex mu_;
  std::map<Key, Rational> by_key_;
  std::map<Rational, SemiMetricDraw> by_value_;
};

/// r_i({a, b}) in (i + 1/2, i + 3/4) ∩ K(alpha). The pair code t = pair(a, b)
/// selects the dyadic interval (i + 1/2 + o/2^e, i + 1/2 + (o+1)/2^e) with
/// t + 1 = 2^L + o, 0 <= o < 2^L, e = L + 2; distinct t give distinct
/// intervals, and the family element is injective in the interval.
inline Rational semi_metric_value(unsigned long alpha, unsigned long seed, unsigned long level,
                                  const Letter& a, const Letter& b) {
  const Integer t = a < b ? cantor_pair(a, b) : cantor_pair(b, a);
  const std::size_t L = bit_length(t + 1) - 1;
  const Integer o = t + 1 - pow2_integer(L);
  const unsigned long e = L + 2;
  const Integer num = Integer(level) * pow2_integer(e) + pow2_integer(e - 1) + o;
  return family_element(alpha, seed, DyadicInterval{e, num});
}

/// Gauge system R = (r_i) of one family alpha. Values are memoized in the
/// attached log when there is one.
class SemiMetricGauge {
 public:
  SemiMetricGauge() = default;
  SemiMetricGauge(unsigned long id, unsigned long seed, std::shared_ptr<DrawLog> log = nullptr)
      : id_(id), seed_(seed), log_(std::move(log)) {}

  unsigned long id() const { return id_; }
  unsigned long seed() const { return seed_; }

  Rational value(unsigned long level, const Letter& a, const Letter& b) const {
    if (a == b) return Rational(0);
    const Letter& lo = a < b ? a : b;
    const Letter& hi = a < b ? b : a;
    const Rational v = semi_metric_value(id_, seed_, level, lo, hi);
    if (!log_) return v;
    return log_->lookup_or_insert(SemiMetricDraw{id_, level, lo, hi, v});
  }

 private:
  unsigned long id_ = 0;
  unsigned long seed_ = 0;
  std::shared_ptr<DrawLog> log_;
};

inline Rational semi_metric(const SemiMetricGauge& gauge, unsigned long level, const Letter& a,
                            const Letter& b) {
  return gauge.value(level, a, b);
}

/// <gamma_k, [m, r_m(a, b))>, zero when a = b.
inline CodedReal rho(const SemiMetricGauge& gauge, ExponentSchedule k, unsigned long m,
                     const Letter& a, const Letter& b) {
  if (a == b) return CodedReal(0);
  return CodedReal::basis(k, IntervalSet::half_open(Rational(Integer(m)), gauge.value(m, a, b)));
}

/// <gamma_k, ⊔_m [m, r_m(x_m, y_m))>.
inline CodedReal sigma(const SemiMetricGauge& gauge, ExponentSchedule k, const Word& x,
                       const Word& y) {
  if (x.size() != y.size()) throw std::domain_error("words must have equal length");
  std::vector<Block> blocks;
  for (std::size_t m = 0; m < x.size(); ++m)
    if (x[m] != y[m]) blocks.push_back({Rational(Integer(m)), gauge.value(m, x[m], y[m])});
  if (blocks.empty()) return CodedReal(0);
  return CodedReal::basis(k, IntervalSet(std::move(blocks)));
}

inline CodedReal tau(const SemiMetricGauge& gauge, ExponentSchedule k, const Word& x,
                     const Word& y) {
  if (x.size() != y.size()) throw std::domain_error("words must have equal length");
  return sigma(gauge, k, prism(x), prism(y));
}

/// Least n with every truncated pair still a pair of distinct words and all
/// truncated unordered pairs distinct.
inline std::size_t find_separating_prefix(const std::vector<std::pair<Word, Word>>& pairs) {
  if (pairs.empty()) return 0;
  const std::size_t len = pairs.front().first.size();
  for (const auto& [x, y] : pairs)
    if (x.size() != len || y.size() != len || len == 0)
      throw std::domain_error("all words must share one positive length");
  for (std::size_t n = 0; n < len; ++n) {
    std::set<std::pair<Word, Word>> seen;
    bool ok = true;
    for (const auto& [x, y] : pairs) {
      Word px(x.begin(), x.begin() + static_cast<long>(n) + 1);
      Word py(y.begin(), y.begin() + static_cast<long>(n) + 1);
      if (px == py) {
        ok = false;
        break;
      }
      if (py < px) std::swap(px, py);
      if (!seen.emplace(std::move(px), std::move(py)).second) {
        ok = false;
        break;
      }
    }
    if (ok) return n;
  }
  throw std::domain_error("pairs are not separated at full length");
}

inline std::string word_label(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += '.';
    s += w[i].get_str();
  }
  return s;
}

/// All words of the given length over {0, ..., alphabet-1}, lexicographic.
inline std::vector<Word> all_words(unsigned long alphabet, std::size_t length) {
  std::vector<Word> out;
  if (alphabet == 0 || length == 0) return out;
  Word w(length, Letter(0));
  for (;;) {
    out.push_back(w);
    std::size_t pos = length;
    while (pos > 0) {
      --pos;
      if (w[pos] + 1 < alphabet) {
        ++w[pos];
        break;
      }
      w[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

/// tau distance matrix on all words of the given length.
inline FiniteMetric product_metric(const SemiMetricGauge& gauge, ExponentSchedule k,
                                   unsigned long alphabet, std::size_t length) {
  const std::vector<Word> words = all_words(alphabet, length);
  const std::size_t n = words.size();
  std::vector<std::string> labels;
  for (const Word& w : words) labels.push_back(word_label(w));
  std::vector<std::vector<CodedReal>> m(n, std::vector<CodedReal>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i][j] = m[j][i] = tau(gauge, k, words[i], words[j]);
  return FiniteMetric(std::move(labels), std::move(m));
}

}  // namespace srm
