#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wgraphlet/logreg.hpp"
#include "wgraphlet/measures.hpp"
#include "wgraphlet/pdb.hpp"
#include "wgraphlet/psn.hpp"

namespace wgraphlet {

inline constexpr const char* kCodeVersion = "0.1.0";

struct ManifestRow {
  std::string id;
  std::filesystem::path pdb;
  char chain = 'A';
  std::optional<ResidueRange> range;  // author numbering
  std::string label;
};

/// CSV with header `id,pdb,chain,range,label`; `range` may be empty.
/// Relative PDB paths resolve against `base_dir`.
struct DatasetManifest {
  std::string name;
  std::vector<ManifestRow> rows;
};

DatasetManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir, std::string name);
DatasetManifest read_manifest(const std::filesystem::path& path);

struct ExtractOptions {
  MeasureKind measure = MeasureKind::Graphlet35;
  double cutoff = 6.0;
  Statistic statistic = Statistic::CramerVonMises;
  SequencePosition sequence_position = SequencePosition::Ordinal;
  unsigned workers = 1;
  std::filesystem::path out;
};

struct SampleFailure {
  std::string id;
  std::string error;
};

struct ExtractSummary {
  std::size_t succeeded = 0;
  std::vector<SampleFailure> failures;
};

/// Feature store layout under `options.out`:
///   index.json          ids, labels, files, config, failures
///   features.csv        vector measures: `id,label,f0..f{D-1}`
///   matrices/<id>.wgdv  matrix measures
/// A failing sample is recorded in the index and does not stop the run.
ExtractSummary extract(const DatasetManifest& manifest, const ExtractOptions& options);

struct EvaluateOptions {
  int folds = 5;
  std::uint64_t seed = 0;
  double lambda = 1.0;
  /// Reduce stored matrices with corr_cc before fitting.
  bool reduce_cc = false;
  bool allow_small_classes = false;
  unsigned workers = 1;
};

/// Loads a store as a labeled dataset (vector table, or corr_cc of the
/// matrices when `reduce_cc`).
LabeledDataset load_dataset(const std::filesystem::path& store, bool reduce_cc = false);

CVReport evaluate(const std::filesystem::path& store, const EvaluateOptions& options);

/// Copies the WGDV matrices of a matrix-measure store to `out/matrices` and
/// writes `out/labels.json`.
void export_dnn(const std::filesystem::path& store, const std::filesystem::path& out);

}  // namespace wgraphlet
