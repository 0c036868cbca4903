#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wgraphlet {

/// Upper-triangle adjacency of a graph on `size` <= 5 nodes. Node pairs are
/// taken in the order (0,1), (0,2), ..., (0,k-1), (1,2), ...; pair p occupies
/// bit (P - 1 - p) so that integer order equals lexicographic order of the
/// bitstring.
using AdjacencyCode = std::uint16_t;

inline constexpr int kMaxGraphletSize = 5;
inline constexpr int kMaxPairs = 10;

namespace adjacency {

constexpr int pair_count(int size) { return size * (size - 1) / 2; }

constexpr int pair_index(int size, int a, int b) {
  if (a > b) std::swap(a, b);
  // Pairs before row a, then offset within row a.
  return a * (2 * size - a - 1) / 2 + (b - a - 1);
}

constexpr AdjacencyCode pair_bit(int size, int a, int b) {
  return static_cast<AdjacencyCode>(1u << (pair_count(size) - 1 - pair_index(size, a, b)));
}

constexpr bool has_edge(AdjacencyCode code, int size, int a, int b) {
  return (code & pair_bit(size, a, b)) != 0;
}

bool is_connected(AdjacencyCode code, int size);
int edge_count(AdjacencyCode code);
/// Relabels node a as perm[a].
AdjacencyCode permute(AdjacencyCode code, int size, std::span<const int> perm);
/// Bitstring of '0'/'1' in pair order.
std::string to_bitstring(AdjacencyCode code, int size);

}  // namespace adjacency

struct EdgeOrbit {
  int id = 0;        // global id, 0..67
  int graphlet = 0;  // owning graphlet id
  int multiplicity = 0;
  std::vector<std::pair<int, int>> canonical_edges;
};

struct GraphletType {
  int id = 0;
  int size = 0;
  AdjacencyCode canonical_code = 0;
  int edge_count = 0;
  std::vector<int> orbit_ids;                  // global ids, ascending
  std::array<std::int8_t, kMaxPairs> pair_orbit{};  // per canonical pair; -1 if absent
};

struct OrderedClass {
  int id = 0;
  int size = 0;
  AdjacencyCode code = 0;
};

/// Result of classifying a labeled subgraph: its graphlet id, the global
/// orbit of every present pair (-1 for absent pairs) and the relabeling that
/// maps the input onto the canonical form.
struct Classification {
  int graphlet = -1;
  std::array<std::int8_t, kMaxPairs> pair_orbit{};
  std::array<std::uint8_t, kMaxGraphletSize> to_canonical{};
};

/// Catalog of the connected graphs on 3-5 nodes, their edge orbits and the
/// ordered (sequence-labeled) classes on 3-4 nodes. Immutable after
/// construction.
class GraphletAtlas {
 public:
  static constexpr int kGraphletCount = 29;
  static constexpr int kOrbitCount = 68;
  static constexpr int kOrderedClassCount = 42;

  GraphletAtlas();

  /// Shared process-wide instance.
  static const GraphletAtlas& instance();

  std::span<const GraphletType> graphlets() const { return graphlets_; }
  std::span<const EdgeOrbit> orbits() const { return orbits_; }
  std::span<const OrderedClass> ordered_classes() const { return ordered_; }

  /// Throws ContractViolation for a disconnected graph or a bad size.
  const Classification& classify(AdjacencyCode code, int size) const {
    if (size < 3 || size > kMaxGraphletSize) throw_bad_size(size);
    const auto& c = lookup_[size][code];
    if (c.graphlet < 0) throw_disconnected(code, size);
    return c;
  }

  /// Exact-labeled lookup for sizes 3-4; nodes labeled in sequence order.
  int classify_ordered(AdjacencyCode code, int size) const {
    if (size < 3 || size > 4) throw_bad_size(size);
    const int id = ordered_lookup_[size][code];
    if (id < 0) throw_disconnected(code, size);
    return id;
  }

 private:
  [[noreturn]] static void throw_bad_size(int size);
  [[noreturn]] static void throw_disconnected(AdjacencyCode code, int size);

  std::vector<GraphletType> graphlets_;
  std::vector<EdgeOrbit> orbits_;
  std::vector<OrderedClass> ordered_;
  std::array<std::vector<Classification>, kMaxGraphletSize + 1> lookup_;
  std::array<std::vector<int>, 5> ordered_lookup_;
};

inline GraphletAtlas build_atlas() { return GraphletAtlas{}; }

/// JSON description of graphlets, orbit partitions and ordered classes.
std::string atlas_to_json(const GraphletAtlas& atlas, int indent = 2);

}  // namespace wgraphlet
