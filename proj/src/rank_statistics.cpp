#include "wgraphlet/rank_statistics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wgraphlet/error.hpp"

namespace wgraphlet {
namespace {

// U can reach ~1e29 for large cells; 128-bit keeps every term exact.
__extension__ typedef __int128 wide_int;

}  // namespace

WeightPool::WeightPool(std::span<const double> weights, std::span<const double> extra_domain)
    : sorted_(weights.begin(), weights.end()) {
  for (double w : sorted_)
    if (!std::isfinite(w)) throw InputError("weight pool values must be finite");
  std::sort(sorted_.begin(), sorted_.end());

  std::vector<double> domain(sorted_);
  for (double v : extra_domain) {
    if (!std::isfinite(v)) throw InputError("weight pool values must be finite");
    domain.push_back(v);
  }
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  values_ = std::move(domain);

  counts_.assign(values_.size(), 0);
  std::size_t k = 0;
  for (double w : sorted_) {
    while (values_[k] != w) ++k;
    ++counts_[k];
  }
  prefix_.assign(values_.size() + 1, 0);
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    prefix_[i + 1] = prefix_[i] + counts_[i];
    const std::uint64_t a = counts_[i];
    if (a > 1) tie_spread4_ += (a - 1) * a * (a + 1) / 3;
  }
}

std::uint32_t WeightPool::slot_of(double value) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), value);
  if (it == values_.end() || *it != value)
    throw ContractViolation("value " + std::to_string(value) + " is outside the pool domain");
  return static_cast<std::uint32_t>(it - values_.begin());
}

std::vector<std::uint32_t> WeightPool::slots_of(std::span<const double> values) const {
  std::vector<std::uint32_t> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(slot_of(v));
  return out;
}

std::vector<HistogramBin> WeightPool::histogram(std::span<const double> sample) const {
  auto slots = slots_of(sample);
  std::sort(slots.begin(), slots.end());
  std::vector<HistogramBin> bins;
  for (std::uint32_t s : slots) {
    if (!bins.empty() && bins.back().slot == s)
      ++bins.back().count;
    else
      bins.push_back({0, s, 1});
  }
  return bins;
}

double cramer_von_mises(std::span<const HistogramBin> sample, const WeightPool& pool) {
  const wide_int m = pool.size();
  if (m == 0) throw ContractViolation("Cramer-von Mises needs a non-empty pool");

  // Everything below is in doubled rank units, so squared terms are exact
  // integers (midranks are half-integers).
  wide_int sample_sq4 = 0;
  wide_int pool_sq4 = pool.tie_spread4();
  wide_int below = 0;  // sample observations in earlier slots
  std::size_t next_slot = 0;

  for (const auto& bin : sample) {
    const std::size_t k = bin.slot;
    if (k >= pool.slot_count() || k < next_slot)
      throw ContractViolation("histogram slots must be increasing and inside the pool domain");
    if (bin.count == 0) continue;
    // Pool slots in [next_slot, k) hold no sample; each pool rank there is
    // shifted by `below`.
    pool_sq4 += static_cast<wide_int>(pool.count_below(k) - pool.count_below(next_slot)) * 4 * below * below;

    const wide_int a = pool.slot_counts()[k];
    const wide_int b = bin.count;
    const wide_int twice_midrank = 2 * static_cast<wide_int>(pool.count_below(k)) + 2 * below + a + b + 1;
    // sum_{p=below+1}^{below+b} (2 midrank - 2p)^2
    const wide_int d = twice_midrank - 2 * below - 2;
    sample_sq4 += b * d * d - 2 * d * b * (b - 1) + 2 * b * (b - 1) * (2 * b - 1) / 3;
    pool_sq4 += a * (2 * below + b) * (2 * below + b);

    below += b;
    next_slot = k + 1;
  }
  if (below == 0) throw ContractViolation("Cramer-von Mises needs a non-empty sample");
  pool_sq4 += static_cast<wide_int>(pool.size() - pool.count_below(next_slot)) * 4 * below * below;

  const wide_int ml = below;
  const wide_int u4 = ml * sample_sq4 + m * pool_sq4;
  const wide_int numerator = 6 * u4 - 4 * ml * m * (4 * ml * m - 1);
  const wide_int denominator = 24 * ml * m * (ml + m);
  return static_cast<double>(static_cast<long double>(numerator) /
                             static_cast<long double>(denominator));
}

}  // namespace wgraphlet
