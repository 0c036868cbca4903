#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace wgraphlet {

/// One bin of a sparse weight histogram. `slot` indexes the distinct values
/// of a WeightPool; `orbit` groups bins of one (edge, orbit) cell and is
/// ignored by the statistics.
struct HistogramBin {
  std::uint32_t orbit = 0;
  std::uint32_t slot = 0;
  std::uint64_t count = 0;

  bool operator==(const HistogramBin&) const = default;
};

/// The reference multiset {w}_PSN: every edge weight once, sorted, with its
/// distinct values ("slots"), per-slot counts and prefix counts. The domain
/// may be widened with `extra_domain` values that carry zero pool count.
class WeightPool {
 public:
  WeightPool() = default;
  explicit WeightPool(std::span<const double> weights, std::span<const double> extra_domain = {});

  /// Total pool size M.
  std::uint64_t size() const { return sorted_.size(); }
  std::size_t slot_count() const { return values_.size(); }

  std::span<const double> sorted_weights() const { return sorted_; }
  std::span<const double> slot_values() const { return values_; }
  std::span<const std::uint64_t> slot_counts() const { return counts_; }
  /// Pool observations in slots < k, for k in 0..slot_count().
  std::uint64_t count_below(std::size_t k) const { return prefix_[k]; }

  /// Slot of an exact domain value; throws ContractViolation otherwise.
  std::uint32_t slot_of(double value) const;
  std::vector<std::uint32_t> slots_of(std::span<const double> values) const;

  /// Slot-sorted histogram of values drawn from the domain.
  std::vector<HistogramBin> histogram(std::span<const double> sample) const;

  /// Sum over slots of a(a^2 - 1)/3: four times the within-slot midrank
  /// spread of the pool.
  std::uint64_t tie_spread4() const { return tie_spread4_; }

 private:
  std::vector<double> sorted_;
  std::vector<double> values_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> prefix_;
  std::uint64_t tie_spread4_ = 0;
};

/// Two-sample Cramer-von Mises statistic of `sample` against the pool,
///
///   t = U / (Ml M (Ml + M)) - (4 Ml M - 1) / (6 (Ml + M)),
///   U = Ml sum_p (r_p - p)^2 + M sum_q (s_q - q)^2,
///
/// with r_p, s_q the midranks of the ordered observations in the pooled set.
/// `sample` bins must have strictly increasing slots (orbit ignored) and a
/// positive total. Runs in O(bins) using exact integer arithmetic for U.
double cramer_von_mises(std::span<const HistogramBin> sample, const WeightPool& pool);

}  // namespace wgraphlet
