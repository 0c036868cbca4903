#include "wgraphlet/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include <json.hpp>

#include "wgraphlet/error.hpp"
#include "wgraphlet/wgdv_io.hpp"

namespace wgraphlet {
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  for (;;) {
    const auto comma = line.find(',');
    out.emplace_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

bool valid_id(std::string_view id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
  });
}

// Integral values print exactly; everything else at 9 significant digits.
std::string format_feature(double v) {
  char buf[64];
  if (std::nearbyint(v) == v && std::abs(v) < 9007199254740992.0)
    std::snprintf(buf, sizeof buf, "%.0f", v == 0.0 ? 0.0 : v);
  else
    std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct SampleOutcome {
  bool ok = false;
  std::string error;
  Eigen::VectorXd vector;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

Json load_index(const fs::path& store) {
  const auto path = store / "index.json";
  if (!fs::exists(path)) throw NotFoundError("no feature store index at " + path.string());
  try {
    return Json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("bad store index: " + std::string(e.what()), 0);
  }
}

}  // namespace

DatasetManifest parse_manifest(std::string_view text, const fs::path& base_dir, std::string name) {
  DatasetManifest manifest;
  manifest.name = std::move(name);
  std::map<std::string, std::size_t> column;
  std::set<std::string> seen;
  std::size_t line_no = 0;

  while (!text.empty()) {
    const auto eol = text.find('\n');
    const std::string_view raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_csv(line);

    if (column.empty()) {
      for (std::size_t i = 0; i < fields.size(); ++i) column[fields[i]] = i;
      for (const char* required : {"id", "pdb", "chain", "label"})
        if (!column.count(required))
          throw ParseError(std::string("manifest header lacks column '") + required + "'", line_no);
      continue;
    }
    if (fields.size() != column.size()) throw ParseError("wrong number of manifest fields", line_no);

    ManifestRow row;
    row.id = fields[column["id"]];
    if (!valid_id(row.id)) throw ParseError("sample id must match [A-Za-z0-9._-]+: '" + row.id + "'", line_no);
    if (!seen.insert(row.id).second) throw ParseError("duplicate sample id '" + row.id + "'", line_no);
    fs::path pdb = fields[column["pdb"]];
    row.pdb = pdb.is_relative() ? base_dir / pdb : pdb;
    const auto& chain = fields[column["chain"]];
    if (chain.size() != 1) throw ParseError("chain must be a single character", line_no);
    row.chain = chain[0];
    if (column.count("range") && !fields[column["range"]].empty()) {
      try {
        row.range = parse_residue_range(fields[column["range"]]);
      } catch (const InputError& e) {
        throw ParseError(e.what(), line_no);
      }
    }
    row.label = fields[column["label"]];
    if (row.label.empty()) throw ParseError("empty label", line_no);
    manifest.rows.push_back(std::move(row));
  }
  return manifest;
}

DatasetManifest read_manifest(const fs::path& path) {
  return parse_manifest(read_text(path), path.parent_path(), path.stem().string());
}

ExtractSummary extract(const DatasetManifest& manifest, const ExtractOptions& options) {
  if (manifest.rows.empty()) throw InputError("manifest has no samples");
  if (options.out.empty()) throw InputError("output directory required");
  const bool matrix = is_matrix_measure(options.measure);
  std::error_code ec;
  fs::create_directories(options.out, ec);
  if (matrix) fs::create_directories(options.out / "matrices", ec);
  if (ec || !fs::is_directory(options.out))
    throw InputError("cannot create output directory " + options.out.string());

  const auto& atlas = GraphletAtlas::instance();
  std::vector<SampleOutcome> outcomes(manifest.rows.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < manifest.rows.size();) {
      const auto& row = manifest.rows[i];
      auto& outcome = outcomes[i];
      try {
        const auto chain = read_pdb_file(row.pdb, row.chain, row.range);
        const auto psn = build_psn(chain, {.cutoff = options.cutoff, .sequence_position = options.sequence_position});
        auto value = compute_measure(psn, options.measure, options.statistic, atlas);
        if (matrix) {
          const FloatMatrix m = value.matrix.cast<float>();
          write_wgdv(options.out / "matrices" / (row.id + ".wgdv"), m);
          outcome.rows = m.rows();
          outcome.cols = m.cols();
        } else {
          outcome.vector = std::move(value.vector);
        }
        outcome.ok = true;
        spdlog::debug("{}: {} residues, {} edges", row.id, chain.size(), psn.edge_count());
      } catch (const std::exception& e) {
        outcome.error = e.what();
        spdlog::warn("{}: {}", row.id, e.what());
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(manifest.rows.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  ExtractSummary summary;
  std::set<std::string> classes;
  Json samples = Json::array();
  std::ostringstream table;
  if (!matrix) {
    const int d = vector_length(options.measure);
    table << "id,label";
    for (int j = 0; j < d; ++j) table << ",f" << j;
    table << "\n";
  }
  for (std::size_t i = 0; i < manifest.rows.size(); ++i) {
    const auto& row = manifest.rows[i];
    const auto& outcome = outcomes[i];
    if (!outcome.ok) {
      summary.failures.push_back({row.id, outcome.error});
      continue;
    }
    ++summary.succeeded;
    classes.insert(row.label);
    Json entry{{"id", row.id}, {"label", row.label}};
    if (matrix) {
      entry["file"] = "matrices/" + row.id + ".wgdv";
      entry["rows"] = outcome.rows;
      entry["cols"] = outcome.cols;
    } else {
      table << row.id << ',' << row.label;
      for (Eigen::Index j = 0; j < outcome.vector.size(); ++j) table << ',' << format_feature(outcome.vector(j));
      table << "\n";
    }
    samples.push_back(std::move(entry));
  }

  Json index;
  index["format"] = "wgraphlet-feature-store";
  index["format_version"] = 1;
  index["code_version"] = kCodeVersion;
  index["dataset"] = manifest.name;
  index["config"] = {{"measure", to_string(options.measure)},
                     {"cutoff", options.cutoff},
                     {"statistic", to_string(options.statistic)},
                     {"sequence_position",
                      options.sequence_position == SequencePosition::Ordinal ? "ordinal" : "author"}};
  index["layout"] = matrix ? "matrix" : "vector";
  if (matrix) {
    index["feature_columns"] = GraphletAtlas::kOrbitCount;
  } else {
    index["vector_table"] = "features.csv";
    index["feature_count"] = vector_length(options.measure);
    write_text(options.out / "features.csv", table.str());
  }
  index["classes"] = Json(std::vector<std::string>(classes.begin(), classes.end()));
  index["samples"] = std::move(samples);
  index["failures"] = Json::array();
  for (const auto& f : summary.failures) index["failures"].push_back({{"id", f.id}, {"error", f.error}});
  write_text(options.out / "index.json", index.dump(2) + "\n");

  spdlog::info("extracted {} of {} samples ({} failed)", summary.succeeded, manifest.rows.size(),
               summary.failures.size());
  return summary;
}

LabeledDataset load_dataset(const fs::path& store, bool reduce_cc) {
  const Json index = load_index(store);
  LabeledDataset data;
  data.class_names = index.at("classes").get<std::vector<std::string>>();
  std::map<std::string, int> class_id;
  for (std::size_t c = 0; c < data.class_names.size(); ++c) class_id[data.class_names[c]] = static_cast<int>(c);

  const auto& samples = index.at("samples");
  const std::string layout = index.at("layout");
  if (layout == "matrix") {
    if (!reduce_cc)
      throw InputError("store holds the matrix measure '" + index["config"]["measure"].get<std::string>() +
                       "'; logistic regression needs a vector: use corr_cc (extract with --measure " +
                       index["config"]["measure"].get<std::string>() +
                       "-cc, or evaluate with --reduce-cc) or export-dnn for the DNN trainer");
    data.features.resize(static_cast<Eigen::Index>(samples.size()), kCorrelationLength);
    Eigen::Index r = 0;
    for (const auto& s : samples) {
      const FloatMatrix m = read_wgdv(store / s.at("file").get<std::string>());
      data.features.row(r++) = corr_cc(m.cast<double>()).transpose();
      data.ids.push_back(s.at("id"));
      data.labels.push_back(class_id.at(s.at("label")));
    }
    return data;
  }

  const auto text = read_text(store / index.at("vector_table").get<std::string>());
  const auto d = index.at("feature_count").get<Eigen::Index>();
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);  // header
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(lines, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (static_cast<Eigen::Index>(fields.size()) != d + 2) throw ParseError("wrong feature count", line_no);
    data.ids.push_back(fields[0]);
    const auto it = class_id.find(fields[1]);
    if (it == class_id.end()) throw ParseError("label not in store classes: " + fields[1], line_no);
    data.labels.push_back(it->second);
    std::vector<double> values(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& f = fields[static_cast<std::size_t>(j) + 2];
      auto [ptr, err] = std::from_chars(f.data(), f.data() + f.size(), values[j]);
      if (err != std::errc{} || ptr != f.data() + f.size()) throw ParseError("bad feature value '" + f + "'", line_no);
    }
    rows.push_back(std::move(values));
  }
  data.features.resize(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i)
    data.features.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(rows[i].data(), d);
  return data;
}

CVReport evaluate(const fs::path& store, const EvaluateOptions& options) {
  const Json index = load_index(store);
  const auto data = load_dataset(store, options.reduce_cc);
  data.validate();

  CVOptions cv;
  cv.folds = options.folds;
  cv.seed = options.seed;
  cv.fit.lambda = options.lambda;
  cv.allow_small_classes = options.allow_small_classes;
  cv.workers = options.workers;
  CVReport report = cross_validate(data, cv);
  report.dataset = index.value("dataset", std::string{});
  report.measure = index["config"]["measure"].get<std::string>();
  if (options.reduce_cc && index.at("layout") == "matrix") report.measure += "-cc";
  report.classifier = "logreg";
  return report;
}

void export_dnn(const fs::path& store, const fs::path& out) {
  const Json index = load_index(store);
  if (index.at("layout") != "matrix")
    throw InputError("export-dnn needs a matrix-measure store (egdvm or wegdvm); this store holds '" +
                     index["config"]["measure"].get<std::string>() + "'");
  std::error_code ec;
  fs::create_directories(out / "matrices", ec);
  if (ec) throw InputError("cannot create export directory " + out.string());

  const auto classes = index.at("classes").get<std::vector<std::string>>();
  std::map<std::string, int> class_id;
  for (std::size_t c = 0; c < classes.size(); ++c) class_id[classes[c]] = static_cast<int>(c);

  Json labels;
  labels["format"] = "wgraphlet-dnn-export";
  labels["format_version"] = 1;
  labels["matrix_format"] = "WGDV v1: magic, u32 LE version, u32 LE rows, u32 LE cols, f32 LE row-major";
  labels["dataset"] = index.value("dataset", std::string{});
  labels["measure"] = index["config"]["measure"];
  labels["statistic"] = index["config"]["statistic"];
  labels["cutoff"] = index["config"]["cutoff"];
  labels["classes"] = classes;
  labels["samples"] = Json::array();
  for (const auto& s : index.at("samples")) {
    const std::string id = s.at("id");
    const fs::path target = fs::path("matrices") / (id + ".wgdv");
    fs::copy_file(store / s.at("file").get<std::string>(), out / target, fs::copy_options::overwrite_existing);
    labels["samples"].push_back({{"id", id},
                                 {"file", target.generic_string()},
                                 {"label", s.at("label")},
                                 {"label_index", class_id.at(s.at("label"))},
                                 {"rows", s.at("rows")},
                                 {"cols", s.at("cols")}});
  }
  write_text(out / "labels.json", labels.dump(2) + "\n");
}

}  // namespace wgraphlet
