#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "wgraphlet/atlas.hpp"
#include "wgraphlet/error.hpp"
#include "wgraphlet/psn.hpp"
#include "wgraphlet/rank_statistics.hpp"

namespace wgraphlet {

/// Simple undirected graph with sorted neighbour lists; edge k is the k-th
/// pair of the construction list.
class AdjacencyGraph {
 public:
  AdjacencyGraph(std::size_t node_count, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);
  explicit AdjacencyGraph(const WeightedPSN& psn);

  std::size_t node_count() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const std::uint32_t> neighbors(std::uint32_t u) const {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }

  /// Index of edge {u, v}, or -1.
  std::int64_t edge_index(std::uint32_t u, std::uint32_t v) const {
    const auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return -1;
    return edge_ids_[offsets_[u] + (it - nb.begin())];
  }

 private:
  void build(std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

  std::size_t edge_count_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> targets_;
  std::vector<std::uint32_t> edge_ids_;
};

/// A connected induced subgraph on 3-5 nodes. `code` is the adjacency over
/// the ascending node list; `pair_edge` gives the graph edge index of every
/// pair (-1 when absent).
struct Occurrence {
  int size = 0;
  std::array<std::uint32_t, kMaxGraphletSize> nodes{};
  AdjacencyCode code = 0;
  std::array<std::int64_t, kMaxPairs> pair_edge{};
};

namespace detail {

template <typename Visitor>
class EsuWalker {
 public:
  EsuWalker(const AdjacencyGraph& g, Visitor& visit, int max_size)
      : g_(g), visit_(visit), max_size_(max_size), mark_(g.node_count(), 0) {}

  void run(std::uint32_t root) {
    root_ = root;
    sub_[0] = root;
    cover(root, +1);
    std::vector<std::uint32_t> ext;
    for (std::uint32_t u : g_.neighbors(root))
      if (u > root) ext.push_back(u);
    extend(1, std::move(ext));
    cover(root, -1);
  }

 private:
  // mark_[x] > 0 iff x is in the current subgraph or adjacent to it.
  void cover(std::uint32_t w, int delta) {
    mark_[w] += delta;
    for (std::uint32_t u : g_.neighbors(w)) mark_[u] += delta;
  }

  void extend(int size, std::vector<std::uint32_t> ext) {
    if (size >= 3) emit(size);
    if (size == max_size_) return;
    while (!ext.empty()) {
      const std::uint32_t w = ext.back();
      ext.pop_back();
      std::vector<std::uint32_t> next;
      if (size + 1 < max_size_) {
        next = ext;
        for (std::uint32_t u : g_.neighbors(w))
          if (u > root_ && mark_[u] == 0) next.push_back(u);
      }
      sub_[size] = w;
      cover(w, +1);
      extend(size + 1, std::move(next));
      cover(w, -1);
    }
  }

  void emit(int size) {
    Occurrence occ;
    occ.size = size;
    std::copy_n(sub_.begin(), size, occ.nodes.begin());
    std::sort(occ.nodes.begin(), occ.nodes.begin() + size);
    occ.pair_edge.fill(-1);
    for (int a = 0; a < size; ++a)
      for (int b = a + 1; b < size; ++b) {
        const auto e = g_.edge_index(occ.nodes[a], occ.nodes[b]);
        if (e < 0) continue;
        occ.code |= adjacency::pair_bit(size, a, b);
        occ.pair_edge[adjacency::pair_index(size, a, b)] = e;
      }
    visit_(static_cast<const Occurrence&>(occ));
  }

  const AdjacencyGraph& g_;
  Visitor& visit_;
  int max_size_;
  std::vector<int> mark_;
  std::array<std::uint32_t, kMaxGraphletSize> sub_{};
  std::uint32_t root_ = 0;
};

}  // namespace detail

struct EnumerationOptions {
  int max_size = kMaxGraphletSize;
  /// Only roots r with r % stride == offset are expanded.
  std::uint32_t offset = 0;
  std::uint32_t stride = 1;
};

/// Calls `visit(const Occurrence&)` exactly once for every connected induced
/// subgraph on 3..max_size nodes. Each subgraph is reached from its smallest
/// node by ESU extension with exclusive neighbourhoods.
template <typename Visitor>
void enumerate_subgraphs(const AdjacencyGraph& g, Visitor&& visit, const EnumerationOptions& options = {}) {
  if (options.max_size < 3 || options.max_size > kMaxGraphletSize || options.stride == 0)
    throw ContractViolation("bad enumeration options");
  detail::EsuWalker<std::remove_reference_t<Visitor>> walker(g, visit, options.max_size);
  for (std::size_t r = options.offset; r < g.node_count(); r += options.stride)
    walker.run(static_cast<std::uint32_t>(r));
}

/// Matrix of non-negative integer counts, one row per edge.
using CountMatrix = Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Per-(edge, orbit) touch counts and pooled edge-weight histograms.
///
/// For every occurrence and every edge e of it lying in orbit o, the cell
/// (e, o) gains one touch and the weight slots of all the occurrence's edges.
/// Accumulators are merged by addition, so contents do not depend on the
/// enumeration order.
class OrbitAccumulator {
 public:
  /// `edge_slots` maps edge index to WeightPool slot; empty disables weight
  /// tracking.
  OrbitAccumulator(std::size_t edge_count, std::vector<std::uint32_t> edge_slots = {});

  void add(const Occurrence& occ, const Classification& cls);
  void merge(OrbitAccumulator&& other);
  /// Flushes pending histogram updates; called by accumulate().
  void finalize();

  bool tracks_weights() const { return !edge_slots_.empty(); }
  std::size_t edge_count() const { return static_cast<std::size_t>(touch_counts_.rows()); }

  const CountMatrix& touch_counts() const { return touch_counts_; }
  /// Occurrences per graphlet type (N_g).
  const std::array<std::uint64_t, GraphletAtlas::kGraphletCount>& graphlet_counts() const {
    return graphlet_counts_;
  }

  /// All bins of an edge, sorted by (orbit, slot).
  std::span<const HistogramBin> histogram_row(std::size_t edge) const { return rows_[edge].bins; }
  /// Bins of cell (edge, orbit), sorted by slot.
  std::span<const HistogramBin> histogram(std::size_t edge, int orbit) const;

 private:
  struct RowHistogram {
    std::vector<HistogramBin> bins;
    std::vector<std::uint64_t> pending;  // (orbit << 32) | slot
    void flush();
    void absorb(std::vector<HistogramBin>&& fresh);
  };

  CountMatrix touch_counts_;
  std::array<std::uint64_t, GraphletAtlas::kGraphletCount> graphlet_counts_{};
  std::vector<std::uint32_t> edge_slots_;
  std::vector<RowHistogram> rows_;
};

struct AccumulateOptions {
  bool track_weights = true;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 1;
};

OrbitAccumulator accumulate(const WeightedPSN& psn, const GraphletAtlas& atlas,
                            const WeightPool& pool, const AccumulateOptions& options = {});
/// Touch counts only.
OrbitAccumulator accumulate_counts(const WeightedPSN& psn, const GraphletAtlas& atlas, unsigned workers = 1);

}  // namespace wgraphlet
