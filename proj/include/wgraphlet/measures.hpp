#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "wgraphlet/atlas.hpp"
#include "wgraphlet/enumerate.hpp"
#include "wgraphlet/error.hpp"
#include "wgraphlet/psn.hpp"
#include "wgraphlet/rank_statistics.hpp"

namespace wgraphlet {

enum class MeasureKind { Graphlet35, Ordered34, Egdvm, EgdvmCc, Wegdvm, WegdvmCc };

/// How a weight multiset becomes a wEGDVM entry.
///  - CramerVonMises: deviance from the PSN weight pool.
///  - Sum: total weight divided by the graphlet's edge count, i.e. the sum
///    over touched graphlets of their mean edge weight. With unit weights
///    this is the touch count.
enum class Statistic { CramerVonMises, Sum };

std::string_view to_string(MeasureKind kind);
std::string_view to_string(Statistic statistic);
MeasureKind parse_measure_kind(std::string_view text);
Statistic parse_statistic(std::string_view text);

constexpr bool is_matrix_measure(MeasureKind kind) {
  return kind == MeasureKind::Egdvm || kind == MeasureKind::Wegdvm;
}
/// Feature count of a vector measure (29, 42 or 2278).
int vector_length(MeasureKind kind);

inline constexpr int kCorrelationLength = GraphletAtlas::kOrbitCount * (GraphletAtlas::kOrbitCount - 1) / 2;

/// Induced occurrence count of each of the 29 graphlets.
Eigen::VectorXd graphlet_3_5(const WeightedPSN& psn, const GraphletAtlas& atlas, unsigned workers = 1);

/// Occurrence count of each of the 42 ordered graphlets (nodes labeled by
/// sequence position).
Eigen::VectorXd ordered_graphlet_3_4(const WeightedPSN& psn, const GraphletAtlas& atlas);

/// M x 68 orbit touch counts, rows in edge order.
Eigen::MatrixXd egdvm(const WeightedPSN& psn, const GraphletAtlas& atlas, unsigned workers = 1);
Eigen::MatrixXd egdvm(const OrbitAccumulator& acc);

/// Weight pool {w}_PSN of a network.
WeightPool weight_pool(const WeightedPSN& psn);

/// M x 68 weighted matrix; cells with an empty multiset are 0.
Eigen::MatrixXd wegdvm(const WeightedPSN& psn, const GraphletAtlas& atlas,
                       Statistic statistic = Statistic::CramerVonMises, unsigned workers = 1);
Eigen::MatrixXd wegdvm(const OrbitAccumulator& acc, const WeightPool& pool, const GraphletAtlas& atlas,
                       Statistic statistic);

/// Upper-triangle Pearson correlations of the columns of `x`, pairs (j, k)
/// with j < k in row-major order. Pairs involving a constant column are 0.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> corr_cc(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (x.rows() < 2) throw DegenerateInputError("correlation needs at least 2 rows");

  const Eigen::Index k = x.cols();
  Eigen::Array<bool, Eigen::Dynamic, 1> constant(k);
  for (Eigen::Index j = 0; j < k; ++j) constant(j) = (x.col(j).array() == x(0, j)).all();

  const Matrix centered = x.rowwise() - x.colwise().mean();
  const Matrix gram = centered.transpose() * centered;

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(k * (k - 1) / 2);
  Eigen::Index at = 0;
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index l = j + 1; l < k; ++l, ++at) {
      if (constant(j) || constant(l)) {
        out(at) = Scalar(0);
        continue;
      }
      const Scalar r = gram(j, l) / std::sqrt(gram(j, j) * gram(l, l));
      out(at) = std::clamp(r, Scalar(-1), Scalar(1));
    }
  return out;
}

/// One measure of one protein: `vector` for vector kinds, `matrix` otherwise.
struct MeasureValue {
  MeasureKind kind = MeasureKind::Graphlet35;
  Eigen::VectorXd vector;
  Eigen::MatrixXd matrix;
};

MeasureValue compute_measure(const WeightedPSN& psn, MeasureKind kind, Statistic statistic,
                             const GraphletAtlas& atlas, unsigned workers = 1);

}  // namespace wgraphlet
