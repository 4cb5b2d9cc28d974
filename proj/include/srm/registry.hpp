// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "srm/coded_real.hpp"
#include "srm/product.hpp"

namespace srm {

/// Hub value P(i) + q·s with s = tau from the reserved gauge on the
/// length-1 words (0) and (letter).
struct HubAllocation {
  unsigned long index = 0;
  Rational target;
  Rational p_value;
  Rational q;
  Letter letter;
  CodedReal s;

  CodedReal value() const { return CodedReal(p_value) + q * s; }
};

/// Frozen copy of a registry; enough to re-check certificates offline.
struct RegistrySnapshot {
  unsigned long k = 0;
  unsigned long seed = 0;
  unsigned long gauge_count = 1;
  std::vector<SemiMetricDraw> draws;
  std::vector<HubAllocation> hubs;

  std::map<Rational, SemiMetricDraw> value_index() const {
    std::map<Rational, SemiMetricDraw> out;
    for (const SemiMetricDraw& d : draws) out.emplace(d.value, d);
    return out;
  }
};

/// Precision index used for the upper enclosure of hub basis terms.
inline constexpr unsigned long kHubEnclosureIndex = 6;

/// Allocator of gauge families and hub values. Gauge 0 is reserved for hub
/// basis terms; block gauges start at 1 and are never reused. Allocation is
/// serialized; reads go through snapshots.
class ValueRegistry {
 public:
  static constexpr unsigned long kReservedGauge = 0;

  explicit ValueRegistry(unsigned long k, unsigned long seed = 0)
      : k_(k), seed_(seed), log_(std::make_shared<DrawLog>()) {}

  ExponentSchedule schedule() const { return ExponentSchedule{k_}; }
  unsigned long seed() const { return seed_; }

  SemiMetricGauge reserved_gauge() const { return SemiMetricGauge(kReservedGauge, seed_, log_); }

  SemiMetricGauge fresh_gauge() {
    std::lock_guard<std::mutex> lock(mu_);
    return SemiMetricGauge(next_gauge_++, seed_, log_);
  }

  /// Smallest hub index above every index allocated so far.
  unsigned long next_hub_index() const {
    std::lock_guard<std::mutex> lock(mu_);
    return hubs_.empty() ? 0 : hubs_.rbegin()->first + 1;
  }

  /// P(i) + q·s with |P(i) - target| <= 2^{-i-1} and q·s <= 2^{-i}.
  CodedReal hub_value(unsigned long k, unsigned long i, const Rational& target) {
    if (k != k_) throw std::domain_error("hub schedule differs from registry schedule");
    if (target <= 0) throw std::domain_error("hub target must be positive");
    std::lock_guard<std::mutex> lock(mu_);
    if (hubs_.count(i)) throw std::domain_error("hub index already allocated");
    HubAllocation h;
    h.index = i;
    h.target = target;
    h.p_value = nearest_unused(target, i);
    h.letter = Letter(static_cast<unsigned long>(hubs_.size() + 1));
    h.s = tau(SemiMetricGauge(kReservedGauge, seed_, log_), schedule(), Word{Letter(0)},
              Word{h.letter});
    const Rational s_hi = eval(h.s, kHubEnclosureIndex).hi;
    h.q = largest_power_of_two_at_most(pow2(-static_cast<long>(i)) / s_hi);
    used_p_.insert(h.p_value);
    const CodedReal value = h.value();
    hubs_.emplace(i, std::move(h));
    return value;
  }

  std::optional<SemiMetricDraw> find_draw(const Rational& v) const { return log_->find_value(v); }

  RegistrySnapshot snapshot() const {
    std::lock_guard<std::mutex> lock(mu_);
    RegistrySnapshot s;
    s.k = k_;
    s.seed = seed_;
    s.gauge_count = next_gauge_;
    s.draws = log_->draws();
    for (const auto& [i, h] : hubs_) s.hubs.push_back(h);
    return s;
  }

  static Rational largest_power_of_two_at_most(Rational r) {
    r.canonicalize();
    if (r <= 0) throw std::domain_error("ratio must be positive");
    long e = static_cast<long>(bit_length(r.get_num())) - static_cast<long>(bit_length(r.get_den()));
    while (pow2(e) > r) --e;
    while (pow2(e + 1) <= r) ++e;
    return pow2(e);
  }

 private:
  /// Grid point within 2^{-i-1} of the target that no earlier hub used; grids
  /// refine until one is free, nearest points first.
  Rational nearest_unused(const Rational& target, unsigned long i) const {
    const Rational radius = pow2(-static_cast<long>(i + 1));
    for (unsigned long g = 0;; ++g) {
      const Rational step = pow2(-static_cast<long>(i + 1 + g));
      Rational ratio = target / step;
      ratio.canonicalize();
      const Integer lo = floor(ratio), hi = ceil(ratio);
      for (Integer t = 0;; ++t) {
        bool inside = false;
        for (const Integer& n : {Integer(lo - t), Integer(hi + t)}) {
          const Rational cand = n * step;
          if (cand < 0 || abs(Rational(cand - target)) > radius) continue;
          inside = true;
          if (!used_p_.count(cand)) return cand;
        }
        if (!inside) break;
      }
    }
  }

  unsigned long k_;
  unsigned long seed_;
  std::shared_ptr<DrawLog> log_;
  mutable std::mutex mu_;
  unsigned long next_gauge_ = 1;
  std::map<unsigned long, HubAllocation> hubs_;
  std::set<Rational> used_p_;
};

}  // namespace srm
