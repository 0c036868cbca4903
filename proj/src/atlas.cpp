#include "wgraphlet/atlas.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "wgraphlet/error.hpp"

namespace wgraphlet {

namespace adjacency {

bool is_connected(AdjacencyCode code, int size) {
  unsigned reached = 1u;
  for (bool grew = true; grew;) {
    grew = false;
    for (int a = 0; a < size; ++a) {
      if (!(reached >> a & 1u)) continue;
      for (int b = 0; b < size; ++b)
        if (a != b && !(reached >> b & 1u) && has_edge(code, size, a, b)) {
          reached |= 1u << b;
          grew = true;
        }
    }
  }
  return reached == (1u << size) - 1;
}

int edge_count(AdjacencyCode code) { return std::popcount(static_cast<unsigned>(code)); }

AdjacencyCode permute(AdjacencyCode code, int size, std::span<const int> perm) {
  AdjacencyCode out = 0;
  for (int a = 0; a < size; ++a)
    for (int b = a + 1; b < size; ++b)
      if (has_edge(code, size, a, b)) out |= pair_bit(size, perm[a], perm[b]);
  return out;
}

std::string to_bitstring(AdjacencyCode code, int size) {
  std::string s;
  for (int a = 0; a < size; ++a)
    for (int b = a + 1; b < size; ++b) s += has_edge(code, size, a, b) ? '1' : '0';
  return s;
}

}  // namespace adjacency

namespace {

std::vector<std::vector<int>> all_permutations(int size) {
  std::vector<int> p(size);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

GraphletAtlas::GraphletAtlas() {
  using namespace adjacency;

  std::array<std::vector<std::vector<int>>, kMaxGraphletSize + 1> perms;
  std::map<std::pair<int, AdjacencyCode>, int> graphlet_of;  // (size, canonical) -> id

  // Graphlets ordered by (size, canonical code).
  for (int size = 3; size <= kMaxGraphletSize; ++size) {
    perms[size] = all_permutations(size);
    std::set<AdjacencyCode> canonical;
    for (unsigned code = 0; code < (1u << pair_count(size)); ++code) {
      if (!is_connected(static_cast<AdjacencyCode>(code), size)) continue;
      AdjacencyCode best = static_cast<AdjacencyCode>(code);
      for (const auto& p : perms[size]) best = std::min(best, permute(static_cast<AdjacencyCode>(code), size, p));
      canonical.insert(best);
    }
    for (AdjacencyCode c : canonical) {
      GraphletType g;
      g.id = static_cast<int>(graphlets_.size());
      g.size = size;
      g.canonical_code = c;
      g.edge_count = edge_count(c);
      graphlet_of[{size, c}] = g.id;
      graphlets_.push_back(g);
    }
  }

  // Edge orbits: pairs joined by automorphisms, ordered by smallest pair.
  for (auto& g : graphlets_) {
    const int pairs = pair_count(g.size);
    DisjointSets sets(pairs);
    for (const auto& p : perms[g.size]) {
      if (permute(g.canonical_code, g.size, p) != g.canonical_code) continue;
      for (int a = 0; a < g.size; ++a)
        for (int b = a + 1; b < g.size; ++b)
          if (has_edge(g.canonical_code, g.size, a, b))
            sets.join(pair_index(g.size, a, b), pair_index(g.size, p[a], p[b]));
    }
    g.pair_orbit.fill(-1);
    std::map<int, int> root_to_orbit;
    for (int a = 0; a < g.size; ++a)
      for (int b = a + 1; b < g.size; ++b) {
        if (!has_edge(g.canonical_code, g.size, a, b)) continue;
        const int root = sets.find(pair_index(g.size, a, b));
        auto [it, fresh] = root_to_orbit.try_emplace(root, static_cast<int>(orbits_.size()));
        if (fresh) {
          EdgeOrbit o;
          o.id = it->second;
          o.graphlet = g.id;
          orbits_.push_back(o);
          g.orbit_ids.push_back(o.id);
        }
        auto& orbit = orbits_[it->second];
        ++orbit.multiplicity;
        orbit.canonical_edges.emplace_back(a, b);
        g.pair_orbit[pair_index(g.size, a, b)] = static_cast<std::int8_t>(orbit.id);
      }
  }

  // Lookup of every labeled graph: graphlet, relabeling, orbit per pair.
  for (int size = 3; size <= kMaxGraphletSize; ++size) {
    auto& table = lookup_[size];
    table.assign(1u << pair_count(size), Classification{});
    for (unsigned raw = 0; raw < table.size(); ++raw) {
      const auto code = static_cast<AdjacencyCode>(raw);
      auto& entry = table[raw];
      entry.pair_orbit.fill(-1);
      if (!is_connected(code, size)) continue;
      const std::vector<int>* best_perm = nullptr;
      AdjacencyCode best = 0xFFFF;
      for (const auto& p : perms[size]) {
        const AdjacencyCode c = permute(code, size, p);
        if (c < best) {
          best = c;
          best_perm = &p;
        }
      }
      const auto& g = graphlets_[graphlet_of.at({size, best})];
      entry.graphlet = g.id;
      for (int a = 0; a < size; ++a) entry.to_canonical[a] = static_cast<std::uint8_t>((*best_perm)[a]);
      for (int a = 0; a < size; ++a)
        for (int b = a + 1; b < size; ++b)
          if (has_edge(code, size, a, b))
            entry.pair_orbit[pair_index(size, a, b)] =
                g.pair_orbit[pair_index(size, (*best_perm)[a], (*best_perm)[b])];
    }
  }

  // Ordered classes ordered by (size, labeled code).
  for (int size = 3; size <= 4; ++size) {
    ordered_lookup_[size].assign(1u << pair_count(size), -1);
    for (unsigned raw = 0; raw < (1u << pair_count(size)); ++raw) {
      const auto code = static_cast<AdjacencyCode>(raw);
      if (!is_connected(code, size)) continue;
      const int id = static_cast<int>(ordered_.size());
      ordered_.push_back({id, size, code});
      ordered_lookup_[size][raw] = id;
    }
  }

  if (graphlets_.size() != kGraphletCount || orbits_.size() != kOrbitCount ||
      ordered_.size() != kOrderedClassCount)
    throw Error("graphlet atlas consistency failure: " + std::to_string(graphlets_.size()) +
                " graphlets, " + std::to_string(orbits_.size()) + " orbits, " +
                std::to_string(ordered_.size()) + " ordered classes");
}

const GraphletAtlas& GraphletAtlas::instance() {
  static const GraphletAtlas atlas;
  return atlas;
}

void GraphletAtlas::throw_bad_size(int size) {
  throw ContractViolation("graphlet size " + std::to_string(size) + " out of range");
}

void GraphletAtlas::throw_disconnected(AdjacencyCode code, int size) {
  throw ContractViolation("adjacency " + adjacency::to_bitstring(code, size) + " on " +
                          std::to_string(size) + " nodes is not connected");
}

std::string atlas_to_json(const GraphletAtlas& atlas, int indent) {
  using nlohmann::json;
  auto edge_list = [](AdjacencyCode code, int size) {
    json edges = json::array();
    for (int a = 0; a < size; ++a)
      for (int b = a + 1; b < size; ++b)
        if (adjacency::has_edge(code, size, a, b)) edges.push_back({a, b});
    return edges;
  };

  json doc;
  doc["pair_order"] = "upper triangle, row-major: (0,1),(0,2),...,(0,k-1),(1,2),...";
  doc["graphlet_count"] = atlas.graphlets().size();
  doc["orbit_count"] = atlas.orbits().size();
  doc["ordered_class_count"] = atlas.ordered_classes().size();
  for (const auto& g : atlas.graphlets()) {
    json orbits = json::array();
    for (int id : g.orbit_ids) {
      const auto& o = atlas.orbits()[id];
      json edges = json::array();
      for (auto [a, b] : o.canonical_edges) edges.push_back({a, b});
      orbits.push_back({{"id", o.id}, {"multiplicity", o.multiplicity}, {"edges", edges}});
    }
    doc["graphlets"].push_back({{"id", g.id},
                                {"size", g.size},
                                {"adjacency", adjacency::to_bitstring(g.canonical_code, g.size)},
                                {"edges", edge_list(g.canonical_code, g.size)},
                                {"orbits", orbits}});
  }
  for (const auto& c : atlas.ordered_classes())
    doc["ordered_classes"].push_back({{"id", c.id},
                                      {"size", c.size},
                                      {"adjacency", adjacency::to_bitstring(c.code, c.size)},
                                      {"edges", edge_list(c.code, c.size)}});
  return doc.dump(indent) + "\n";
}

}  // namespace wgraphlet
