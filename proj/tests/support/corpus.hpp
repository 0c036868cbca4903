#pragma once

// Writes a small on-disk corpus of synthetic PDB files plus a manifest.

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "support/oracles.hpp"

namespace wgraphlet::testing {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("wgraphlet-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Two classes of chains: "compact" folds into a tight sphere, "loose" into
/// a wide one. Returns the manifest path.
inline std::filesystem::path write_corpus(const std::filesystem::path& dir, int per_class, int residues,
                                          std::uint64_t seed) {
  std::filesystem::create_directories(dir / "pdb");
  std::string manifest = "id,pdb,chain,range,label\n";
  for (int i = 0; i < 2 * per_class; ++i) {
    const bool compact = i % 2 == 0;
    const double radius = compact ? 0.0 : 3.6 * std::cbrt(static_cast<double>(residues)) + 6.0;
    const std::string id = (compact ? "cmp" : "lse") + std::to_string(i / 2);
    write_file(dir / "pdb" / (id + ".pdb"), pdb_text(compact_chain(residues, seed + i, radius)));
    manifest += id + ",pdb/" + id + ".pdb,A,," + (compact ? "compact" : "loose") + "\n";
  }
  write_file(dir / "manifest.csv", manifest);
  return dir / "manifest.csv";
}

}  // namespace wgraphlet::testing
