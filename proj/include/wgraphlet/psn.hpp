#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "wgraphlet/pdb.hpp"

namespace wgraphlet {

/// Undirected PSN edge between 0-based node indices `u < v`.
struct PsnEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  double d_space = 0.0;
  double weight = 0.0;

  bool operator==(const PsnEdge&) const = default;
};

/// Weighted protein structure network. Node k is residue ordinal k + 1;
/// edges are sorted by (u, v).
struct WeightedPSN {
  std::size_t node_count = 0;
  double cutoff = 0.0;
  std::vector<PsnEdge> edges;

  std::size_t edge_count() const { return edges.size(); }
  bool operator==(const WeightedPSN&) const = default;
};

enum class SequencePosition { Ordinal, AuthorNumber };

struct PsnOptions {
  double cutoff = 6.0;
  SequencePosition sequence_position = SequencePosition::Ordinal;
  bool use_cell_list = true;
};

/// Smallest heavy-atom distance between two residues.
double space_distance(const Residue& a, const Residue& b);

/// Edge (i, j) iff space_distance < cutoff; weight = sqrt(|i - j| / d_space).
WeightedPSN build_psn(const ResidueChain& chain, const PsnOptions& options = {});

/// Text dump: header "n m cutoff", then one "i j d_space weight" line per
/// edge with 1-based ordinals and 17 significant digits.
void write_psn(std::ostream& out, const WeightedPSN& psn);
WeightedPSN read_psn(std::istream& in);

}  // namespace wgraphlet
