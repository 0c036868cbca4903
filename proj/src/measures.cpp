#include "wgraphlet/measures.hpp"

#include <string>

namespace wgraphlet {

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Graphlet35: return "graphlet35";
    case MeasureKind::Ordered34: return "ordered34";
    case MeasureKind::Egdvm: return "egdvm";
    case MeasureKind::EgdvmCc: return "egdvm-cc";
    case MeasureKind::Wegdvm: return "wegdvm";
    case MeasureKind::WegdvmCc: return "wegdvm-cc";
  }
  return "?";
}

std::string_view to_string(Statistic statistic) {
  return statistic == Statistic::CramerVonMises ? "cvm" : "sum";
}

MeasureKind parse_measure_kind(std::string_view text) {
  for (auto kind : {MeasureKind::Graphlet35, MeasureKind::Ordered34, MeasureKind::Egdvm,
                    MeasureKind::EgdvmCc, MeasureKind::Wegdvm, MeasureKind::WegdvmCc})
    if (to_string(kind) == text) return kind;
  throw InputError("unknown measure '" + std::string(text) + "'");
}

Statistic parse_statistic(std::string_view text) {
  if (text == "cvm") return Statistic::CramerVonMises;
  if (text == "sum") return Statistic::Sum;
  throw InputError("unknown statistic '" + std::string(text) + "'");
}

int vector_length(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Graphlet35: return GraphletAtlas::kGraphletCount;
    case MeasureKind::Ordered34: return GraphletAtlas::kOrderedClassCount;
    case MeasureKind::EgdvmCc:
    case MeasureKind::WegdvmCc: return kCorrelationLength;
    default: throw ContractViolation(std::string(to_string(kind)) + " is a matrix measure");
  }
}

Eigen::VectorXd graphlet_3_5(const WeightedPSN& psn, const GraphletAtlas& atlas, unsigned workers) {
  const auto acc = accumulate_counts(psn, atlas, workers);
  Eigen::VectorXd out(GraphletAtlas::kGraphletCount);
  for (int g = 0; g < GraphletAtlas::kGraphletCount; ++g) out(g) = static_cast<double>(acc.graphlet_counts()[g]);
  return out;
}

Eigen::VectorXd ordered_graphlet_3_4(const WeightedPSN& psn, const GraphletAtlas& atlas) {
  const AdjacencyGraph graph(psn);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(GraphletAtlas::kOrderedClassCount);
  enumerate_subgraphs(
      graph, [&](const Occurrence& occ) { out(atlas.classify_ordered(occ.code, occ.size)) += 1.0; },
      {.max_size = 4});
  return out;
}

Eigen::MatrixXd egdvm(const OrbitAccumulator& acc) { return acc.touch_counts().cast<double>(); }

Eigen::MatrixXd egdvm(const WeightedPSN& psn, const GraphletAtlas& atlas, unsigned workers) {
  return egdvm(accumulate_counts(psn, atlas, workers));
}

WeightPool weight_pool(const WeightedPSN& psn) {
  std::vector<double> weights;
  weights.reserve(psn.edges.size());
  for (const auto& e : psn.edges) weights.push_back(e.weight);
  return WeightPool(weights);
}

Eigen::MatrixXd wegdvm(const OrbitAccumulator& acc, const WeightPool& pool, const GraphletAtlas& atlas,
                       Statistic statistic) {
  if (!acc.tracks_weights() && acc.edge_count() > 0)
    throw ContractViolation("wEGDVM needs an accumulator with weight histograms");
  const auto edges = static_cast<Eigen::Index>(acc.edge_count());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(edges, GraphletAtlas::kOrbitCount);
  const auto values = pool.slot_values();

  for (Eigen::Index e = 0; e < edges; ++e) {
    const auto row = acc.histogram_row(static_cast<std::size_t>(e));
    for (std::size_t begin = 0; begin < row.size();) {
      std::size_t end = begin;
      while (end < row.size() && row[end].orbit == row[begin].orbit) ++end;
      const auto cell = row.subspan(begin, end - begin);
      const int orbit = static_cast<int>(row[begin].orbit);
      if (statistic == Statistic::CramerVonMises) {
        out(e, orbit) = cramer_von_mises(cell, pool);
      } else {
        double total = 0.0;
        for (const auto& bin : cell) total += static_cast<double>(bin.count) * values[bin.slot];
        out(e, orbit) = total / atlas.graphlets()[atlas.orbits()[orbit].graphlet].edge_count;
      }
      begin = end;
    }
  }
  return out;
}

Eigen::MatrixXd wegdvm(const WeightedPSN& psn, const GraphletAtlas& atlas, Statistic statistic,
                       unsigned workers) {
  const auto pool = weight_pool(psn);
  const auto acc = accumulate(psn, atlas, pool, {.track_weights = true, .workers = workers});
  return wegdvm(acc, pool, atlas, statistic);
}

MeasureValue compute_measure(const WeightedPSN& psn, MeasureKind kind, Statistic statistic,
                             const GraphletAtlas& atlas, unsigned workers) {
  MeasureValue value;
  value.kind = kind;
  switch (kind) {
    case MeasureKind::Graphlet35: value.vector = graphlet_3_5(psn, atlas, workers); break;
    case MeasureKind::Ordered34: value.vector = ordered_graphlet_3_4(psn, atlas); break;
    case MeasureKind::Egdvm: value.matrix = egdvm(psn, atlas, workers); break;
    case MeasureKind::EgdvmCc: value.vector = corr_cc(egdvm(psn, atlas, workers)); break;
    case MeasureKind::Wegdvm: value.matrix = wegdvm(psn, atlas, statistic, workers); break;
    case MeasureKind::WegdvmCc: value.vector = corr_cc(wegdvm(psn, atlas, statistic, workers)); break;
  }
  return value;
}

}  // namespace wgraphlet
