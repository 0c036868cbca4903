#include "wgraphlet/enumerate.hpp"

#include <numeric>
#include <thread>

#include "wgraphlet/error.hpp"

namespace wgraphlet {

AdjacencyGraph::AdjacencyGraph(std::size_t node_count,
                               std::span<const std::pair<std::uint32_t, std::uint32_t>> edges)
    : offsets_(node_count + 1, 0) {
  build(edges);
}

AdjacencyGraph::AdjacencyGraph(const WeightedPSN& psn) : offsets_(psn.node_count + 1, 0) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(psn.edges.size());
  for (const auto& e : psn.edges) pairs.emplace_back(e.u, e.v);
  build(pairs);
}

void AdjacencyGraph::build(std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
  const std::size_t n = offsets_.size() - 1;
  edge_count_ = edges.size();
  for (auto [u, v] : edges) {
    if (u == v || u >= n || v >= n) throw ContractViolation("edge endpoints must be distinct nodes in range");
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());

  std::vector<std::pair<std::uint32_t, std::uint32_t>> slots(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t k = 0; k < edges.size(); ++k) {
    auto [u, v] = edges[k];
    slots[fill[u]++] = {v, k};
    slots[fill[v]++] = {u, k};
  }
  targets_.resize(slots.size());
  edge_ids_.resize(slots.size());
  for (std::size_t u = 0; u < n; ++u) {
    std::sort(slots.begin() + offsets_[u], slots.begin() + offsets_[u + 1]);
    for (std::size_t i = offsets_[u]; i < offsets_[u + 1]; ++i) {
      if (i > offsets_[u] && slots[i].first == slots[i - 1].first)
        throw ContractViolation("duplicate edge in graph");
      targets_[i] = slots[i].first;
      edge_ids_[i] = slots[i].second;
    }
  }
}

OrbitAccumulator::OrbitAccumulator(std::size_t edge_count, std::vector<std::uint32_t> edge_slots)
    : touch_counts_(CountMatrix::Zero(static_cast<Eigen::Index>(edge_count), GraphletAtlas::kOrbitCount)),
      edge_slots_(std::move(edge_slots)) {
  if (!edge_slots_.empty()) {
    if (edge_slots_.size() != edge_count) throw ContractViolation("one weight slot per edge required");
    rows_.resize(edge_count);
  }
}

void OrbitAccumulator::RowHistogram::flush() {
  if (pending.empty()) return;
  std::sort(pending.begin(), pending.end());
  std::vector<HistogramBin> fresh;
  for (std::uint64_t key : pending) {
    const auto orbit = static_cast<std::uint32_t>(key >> 32);
    const auto slot = static_cast<std::uint32_t>(key);
    if (!fresh.empty() && fresh.back().orbit == orbit && fresh.back().slot == slot)
      ++fresh.back().count;
    else
      fresh.push_back({orbit, slot, 1});
  }
  pending.clear();
  pending.shrink_to_fit();
  absorb(std::move(fresh));
}

void OrbitAccumulator::RowHistogram::absorb(std::vector<HistogramBin>&& fresh) {
  std::vector<HistogramBin> merged;
  merged.reserve(bins.size() + fresh.size());
  auto key = [](const HistogramBin& b) { return std::pair(b.orbit, b.slot); };
  auto a = bins.begin();
  auto f = fresh.begin();
  while (a != bins.end() || f != fresh.end()) {
    if (f == fresh.end() || (a != bins.end() && key(*a) < key(*f))) {
      merged.push_back(*a++);
    } else if (a == bins.end() || key(*f) < key(*a)) {
      merged.push_back(*f++);
    } else {
      merged.push_back({a->orbit, a->slot, a->count + f->count});
      ++a;
      ++f;
    }
  }
  bins = std::move(merged);
}

void OrbitAccumulator::add(const Occurrence& occ, const Classification& cls) {
  ++graphlet_counts_[cls.graphlet];
  const int pairs = adjacency::pair_count(occ.size);
  for (int p = 0; p < pairs; ++p) {
    const auto e = occ.pair_edge[p];
    if (e < 0) continue;
    const int orbit = cls.pair_orbit[p];
    ++touch_counts_(e, orbit);
    if (edge_slots_.empty()) continue;
    auto& row = rows_[e];
    for (int q = 0; q < pairs; ++q)
      if (occ.pair_edge[q] >= 0)
        row.pending.push_back(static_cast<std::uint64_t>(orbit) << 32 | edge_slots_[occ.pair_edge[q]]);
    if (row.pending.size() >= std::max<std::size_t>(4096, 2 * row.bins.size())) row.flush();
  }
}

void OrbitAccumulator::merge(OrbitAccumulator&& other) {
  if (other.edge_count() != edge_count() || other.tracks_weights() != tracks_weights())
    throw ContractViolation("cannot merge accumulators of different shape");
  touch_counts_ += other.touch_counts_;
  for (std::size_t g = 0; g < graphlet_counts_.size(); ++g) graphlet_counts_[g] += other.graphlet_counts_[g];
  for (std::size_t e = 0; e < rows_.size(); ++e) {
    auto& theirs = other.rows_[e];
    theirs.flush();
    rows_[e].flush();
    rows_[e].absorb(std::move(theirs.bins));
    theirs.bins = {};
  }
}

void OrbitAccumulator::finalize() {
  for (auto& row : rows_) row.flush();
}

std::span<const HistogramBin> OrbitAccumulator::histogram(std::size_t edge, int orbit) const {
  const auto& bins = rows_.at(edge).bins;
  const auto o = static_cast<std::uint32_t>(orbit);
  auto lo = std::lower_bound(bins.begin(), bins.end(), o,
                             [](const HistogramBin& b, std::uint32_t x) { return b.orbit < x; });
  auto hi = std::upper_bound(lo, bins.end(), o,
                             [](std::uint32_t x, const HistogramBin& b) { return x < b.orbit; });
  return {bins.data() + (lo - bins.begin()), static_cast<std::size_t>(hi - lo)};
}

namespace {

OrbitAccumulator run_accumulation(const WeightedPSN& psn, const GraphletAtlas& atlas,
                                  std::vector<std::uint32_t> slots, unsigned workers) {
  const AdjacencyGraph graph(psn);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, psn.node_count)));

  std::vector<OrbitAccumulator> parts;
  parts.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) parts.emplace_back(psn.edges.size(), slots);

  auto work = [&](unsigned t) {
    auto& acc = parts[t];
    enumerate_subgraphs(
        graph, [&](const Occurrence& occ) { acc.add(occ, atlas.classify(occ.code, occ.size)); },
        {.offset = t, .stride = workers});
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    for (unsigned t = 0; t < workers; ++t) threads.emplace_back(work, t);
  }

  OrbitAccumulator result = std::move(parts[0]);
  for (unsigned t = 1; t < workers; ++t) result.merge(std::move(parts[t]));
  result.finalize();
  return result;
}

}  // namespace

OrbitAccumulator accumulate(const WeightedPSN& psn, const GraphletAtlas& atlas, const WeightPool& pool,
                            const AccumulateOptions& options) {
  std::vector<std::uint32_t> slots;
  if (options.track_weights && !psn.edges.empty()) {
    slots.reserve(psn.edges.size());
    for (const auto& e : psn.edges) slots.push_back(pool.slot_of(e.weight));
  }
  return run_accumulation(psn, atlas, std::move(slots), options.workers);
}

OrbitAccumulator accumulate_counts(const WeightedPSN& psn, const GraphletAtlas& atlas, unsigned workers) {
  return run_accumulation(psn, atlas, {}, workers);
}

}  // namespace wgraphlet
