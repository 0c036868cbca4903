// Command-line front end: atlas dump, psn build, extract, evaluate, export-dnn.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "wgraphlet/atlas.hpp"
#include "wgraphlet/error.hpp"
#include "wgraphlet/pipeline.hpp"
#include "wgraphlet/psn.hpp"

namespace {

void configure_logging() {
  spdlog::set_default_logger(spdlog::stderr_color_mt("wgraphlet"));
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* level = std::getenv("WGRAPHLET_LOG_LEVEL"))
    spdlog::set_level(spdlog::level::from_str(level));
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file) throw wgraphlet::Error("cannot write " + out);
  file << text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace wgraphlet;
  configure_logging();

  CLI::App app{"Weighted graphlet features for protein structure networks"};
  app.require_subcommand(1);

  auto* atlas_cmd = app.add_subcommand("atlas", "Graphlet atlas utilities");
  atlas_cmd->require_subcommand(1);
  auto* atlas_dump = atlas_cmd->add_subcommand("dump", "Write the atlas as JSON");
  std::string atlas_out;
  atlas_dump->add_option("--out", atlas_out, "Output file (default stdout)");

  auto* psn_cmd = app.add_subcommand("psn", "Protein structure network utilities");
  psn_cmd->require_subcommand(1);
  auto* psn_build = psn_cmd->add_subcommand("build", "Build a weighted PSN from a PDB file");
  std::string pdb_path, chain = "A", range_text, psn_out, seq_mode = "ordinal";
  double cutoff = 6.0;
  psn_build->add_option("pdb", pdb_path, "PDB file")->required()->check(CLI::ExistingFile);
  psn_build->add_option("--chain", chain, "Chain identifier")->capture_default_str();
  psn_build->add_option("--range", range_text, "Author-numbered residue range start-end");
  psn_build->add_option("--cutoff", cutoff, "Contact cutoff in angstrom")->capture_default_str();
  psn_build->add_option("--sequence-position", seq_mode, "ordinal|author")
      ->check(CLI::IsMember({"ordinal", "author"}))
      ->capture_default_str();
  psn_build->add_option("--out", psn_out, "Output file (default stdout)");

  auto* extract_cmd = app.add_subcommand("extract", "Compute one measure for every manifest sample");
  std::string manifest_path, measure = "graphlet35", statistic = "cvm", store_out;
  unsigned workers = 1;
  extract_cmd->add_option("manifest", manifest_path, "Manifest CSV (id,pdb,chain,range,label)")
      ->required()
      ->check(CLI::ExistingFile);
  extract_cmd->add_option("--measure", measure, "graphlet35|ordered34|egdvm|egdvm-cc|wegdvm|wegdvm-cc")
      ->check(CLI::IsMember({"graphlet35", "ordered34", "egdvm", "egdvm-cc", "wegdvm", "wegdvm-cc"}))
      ->capture_default_str();
  extract_cmd->add_option("--cutoff", cutoff, "Contact cutoff in angstrom")->capture_default_str();
  extract_cmd->add_option("--statistic", statistic, "cvm|sum")
      ->check(CLI::IsMember({"cvm", "sum"}))
      ->capture_default_str();
  extract_cmd->add_option("--sequence-position", seq_mode, "ordinal|author")
      ->check(CLI::IsMember({"ordinal", "author"}))
      ->capture_default_str();
  extract_cmd->add_option("--workers", workers, "Parallel samples")->capture_default_str();
  extract_cmd->add_option("--out", store_out, "Feature store directory")->required();

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Stratified k-fold logistic regression");
  std::string store_path, report_out;
  EvaluateOptions eval;
  evaluate_cmd->add_option("store", store_path, "Feature store directory")->required()->check(CLI::ExistingDirectory);
  evaluate_cmd->add_option("--folds", eval.folds, "Number of folds")->capture_default_str();
  evaluate_cmd->add_option("--seed", eval.seed, "Fold shuffling seed")->capture_default_str();
  evaluate_cmd->add_option("--lambda", eval.lambda, "L2 strength on standardized features")->capture_default_str();
  evaluate_cmd->add_flag("--reduce-cc", eval.reduce_cc, "Apply corr_cc to a matrix-measure store");
  evaluate_cmd->add_flag("--allow-small-classes", eval.allow_small_classes,
                         "Permit classes with fewer samples than folds");
  evaluate_cmd->add_option("--workers", eval.workers, "Parallel folds")->capture_default_str();
  evaluate_cmd->add_option("--out", report_out, "Report JSON (default stdout)");

  auto* export_cmd = app.add_subcommand("export-dnn", "Export matrix features for the DNN trainer");
  std::string export_out;
  export_cmd->add_option("store", store_path, "Feature store directory")->required()->check(CLI::ExistingDirectory);
  export_cmd->add_option("--out", export_out, "Export directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const auto seq = seq_mode == "author" ? SequencePosition::AuthorNumber : SequencePosition::Ordinal;
    if (atlas_dump->parsed()) {
      emit(atlas_to_json(GraphletAtlas::instance()), atlas_out);
    } else if (psn_build->parsed()) {
      if (chain.size() != 1) throw InputError("--chain takes a single character");
      std::optional<ResidueRange> range;
      if (!range_text.empty()) range = parse_residue_range(range_text);
      const auto residues = read_pdb_file(pdb_path, chain[0], range);
      const auto psn = build_psn(residues, {.cutoff = cutoff, .sequence_position = seq});
      std::ostringstream text;
      write_psn(text, psn);
      emit(text.str(), psn_out);
      spdlog::info("{} chain {}: {} residues, {} edges", residues.protein_id, chain, residues.size(),
                   psn.edge_count());
    } else if (extract_cmd->parsed()) {
      ExtractOptions options;
      options.measure = parse_measure_kind(measure);
      options.cutoff = cutoff;
      options.statistic = parse_statistic(statistic);
      options.sequence_position = seq;
      options.workers = workers;
      options.out = store_out;
      const auto summary = extract(read_manifest(manifest_path), options);
      for (const auto& f : summary.failures) std::cerr << "failed: " << f.id << ": " << f.error << "\n";
      std::cerr << summary.succeeded << " succeeded, " << summary.failures.size() << " failed\n";
      return summary.succeeded > 0 ? EXIT_SUCCESS : EXIT_FAILURE;
    } else if (evaluate_cmd->parsed()) {
      const auto report = evaluate(store_path, eval);
      emit(report.to_json(), report_out);
    } else if (export_cmd->parsed()) {
      export_dnn(store_path, export_out);
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
