#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace wgraphlet {

struct HeavyAtom {
  std::string element;
  Eigen::Vector3d coords;
};

struct Residue {
  int ordinal = 0;        // 1-based position among retained residues
  int author_number = 0;  // resSeq column
  char insertion_code = ' ';
  std::string name;
  std::vector<HeavyAtom> atoms;
};

struct ResidueChain {
  std::string protein_id;
  char chain_id = 'A';
  std::vector<Residue> residues;

  std::size_t size() const { return residues.size(); }
};

/// Inclusive interval of author residue numbers.
struct ResidueRange {
  int first = 0;
  int last = 0;
};

/// Parses "start-end" (either bound may be negative, e.g. "-3-120").
ResidueRange parse_residue_range(std::string_view text);

/// Reads ATOM records of `chain` from PDB text.
///
/// Only the first MODEL is read. HETATM records, hydrogens (H and D), water
/// and alternate locations other than blank/'A' are skipped. Residues are
/// ordered by (author number, insertion code) and receive ordinals 1..n after
/// range filtering. Throws ParseError, NotFoundError or DegenerateInputError.
ResidueChain parse_pdb(std::string_view text, char chain,
                       std::optional<ResidueRange> range = std::nullopt,
                       std::string protein_id = {});

ResidueChain read_pdb_file(const std::filesystem::path& path, char chain,
                           std::optional<ResidueRange> range = std::nullopt);

}  // namespace wgraphlet
