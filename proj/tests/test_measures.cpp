#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "wgraphlet/measures.hpp"

using namespace wgraphlet;

namespace {

WeightedPSN random_weighted(std::mt19937_64& rng, std::uint32_t n, double p, int distinct) {
  const auto edges = testing::erdos_renyi(n, p, rng);
  return testing::make_psn(n, edges, testing::random_weights(edges.size(), rng, distinct));
}

}  // namespace

TEST_CASE("vector and matrix measures match the subset scan") {
  std::mt19937_64 rng(7);
  const auto& atlas = GraphletAtlas::instance();
  for (int trial = 0; trial < 30; ++trial) {
    const auto psn = random_weighted(rng, 5 + trial % 8, trial % 2 ? 0.4 : 0.2, 0);
    const auto oracle = testing::subset_scan(psn, atlas);
    const auto g35 = graphlet_3_5(psn, atlas);
    const auto o34 = ordered_graphlet_3_4(psn, atlas);
    for (int g = 0; g < GraphletAtlas::kGraphletCount; ++g) CHECK(g35(g) == static_cast<double>(oracle.graphlets[g]));
    for (int c = 0; c < GraphletAtlas::kOrderedClassCount; ++c) CHECK(o34(c) == static_cast<double>(oracle.ordered[c]));
    CHECK(egdvm(psn, atlas) == oracle.egdvm);
  }
}

TEST_CASE("wEGDVM cells equal the naive statistic of the pooled weights") {
  std::mt19937_64 rng(8);
  const auto& atlas = GraphletAtlas::instance();
  for (int trial = 0; trial < 15; ++trial) {
    const auto psn = random_weighted(rng, 9, 0.45, trial % 2 ? 5 : 0);
    std::vector<double> pool;
    for (const auto& e : psn.edges) pool.push_back(e.weight);
    const auto oracle = testing::subset_scan(psn, atlas);
    const auto cvm = wegdvm(psn, atlas, Statistic::CramerVonMises);
    const auto sum = wegdvm(psn, atlas, Statistic::Sum);
    REQUIRE(cvm.rows() == static_cast<Eigen::Index>(psn.edge_count()));
    REQUIRE(cvm.cols() == 68);
    for (std::size_t e = 0; e < psn.edge_count(); ++e)
      for (int o = 0; o < 68; ++o) {
        const auto& ms = oracle.multisets[e * 68 + o];
        const auto i = static_cast<Eigen::Index>(e);
        if (ms.empty()) {
          CHECK(cvm(i, o) == 0.0);
          CHECK(sum(i, o) == 0.0);
          continue;
        }
        CHECK(cvm(i, o) == doctest::Approx(testing::naive_cramer_von_mises(ms, pool)).epsilon(1e-12));
        double total = 0;
        for (double w : ms) total += w;
        const int edges_in_graphlet = atlas.graphlets()[atlas.orbits()[o].graphlet].edge_count;
        CHECK(sum(i, o) == doctest::Approx(total / edges_in_graphlet).epsilon(1e-12));
      }
  }
}

TEST_CASE("CvM wEGDVM is unchanged by strictly increasing weight transforms") {
  std::mt19937_64 rng(10);
  const auto& atlas = GraphletAtlas::instance();
  for (int trial = 0; trial < 8; ++trial) {
    auto psn = random_weighted(rng, 14, 0.35, trial % 2 ? 4 : 0);
    const auto base = wegdvm(psn, atlas);
    for (auto& e : psn.edges) e.weight = std::log1p(e.weight) * 10.0 + std::pow(e.weight, 3);
    CHECK(wegdvm(psn, atlas) == base);
  }
}

TEST_CASE("unit weights with the sum statistic reproduce EGDVM") {
  std::mt19937_64 rng(11);
  const auto& atlas = GraphletAtlas::instance();
  for (int trial = 0; trial < 10; ++trial) {
    const auto psn = testing::make_psn(20, testing::erdos_renyi(20, 0.3, rng));
    CHECK(wegdvm(psn, atlas, Statistic::Sum) == egdvm(psn, atlas));
  }
}

TEST_CASE("corr_cc against a two-pass Pearson oracle") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(30, 6);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  x.col(2) = (3.0 * x.col(0)).array() - 1.0;  // perfectly correlated
  x.col(4).setConstant(2.5);
  const Eigen::VectorXd r = corr_cc(x);
  REQUIRE(r.size() == 15);
  int at = 0;
  for (int j = 0; j < 6; ++j)
    for (int k = j + 1; k < 6; ++k, ++at) {
      if (j == 4 || k == 4) {
        CHECK(r(at) == 0.0);
        continue;
      }
      CHECK(r(at) == doctest::Approx(testing::pearson(x.col(j), x.col(k))).epsilon(1e-12));
      CHECK(std::abs(r(at)) <= 1.0);
    }
  CHECK(r(1) == doctest::Approx(1.0));  // pair (0, 2)

  const Eigen::MatrixXf xf = x.cast<float>();
  CHECK(corr_cc(xf).size() == 15);
  CHECK_THROWS_AS(corr_cc(Eigen::MatrixXd::Ones(1, 4)), DegenerateInputError);
}

TEST_CASE("compute_measure shapes") {
  std::mt19937_64 rng(13);
  const auto psn = random_weighted(rng, 16, 0.4, 0);
  const auto& atlas = GraphletAtlas::instance();
  CHECK(compute_measure(psn, MeasureKind::Graphlet35, Statistic::CramerVonMises, atlas).vector.size() == 29);
  CHECK(compute_measure(psn, MeasureKind::Ordered34, Statistic::CramerVonMises, atlas).vector.size() == 42);
  CHECK(compute_measure(psn, MeasureKind::EgdvmCc, Statistic::CramerVonMises, atlas).vector.size() == 2278);
  CHECK(compute_measure(psn, MeasureKind::WegdvmCc, Statistic::CramerVonMises, atlas).vector.size() == 2278);
  const auto m = compute_measure(psn, MeasureKind::Wegdvm, Statistic::Sum, atlas);
  CHECK(m.matrix.rows() == static_cast<Eigen::Index>(psn.edge_count()));
  CHECK(m.matrix.cols() == 68);
  CHECK(compute_measure(psn, MeasureKind::Egdvm, Statistic::CramerVonMises, atlas).matrix == egdvm(psn, atlas));
}

TEST_CASE("measure and statistic names round-trip") {
  for (auto k : {MeasureKind::Graphlet35, MeasureKind::Ordered34, MeasureKind::Egdvm, MeasureKind::EgdvmCc,
                 MeasureKind::Wegdvm, MeasureKind::WegdvmCc})
    CHECK(parse_measure_kind(to_string(k)) == k);
  for (auto s : {Statistic::CramerVonMises, Statistic::Sum}) CHECK(parse_statistic(to_string(s)) == s);
  CHECK_THROWS(parse_measure_kind("graphlet36"));
  CHECK_THROWS(parse_statistic("ks"));
  CHECK(vector_length(MeasureKind::Graphlet35) == 29);
  CHECK(vector_length(MeasureKind::Ordered34) == 42);
  CHECK(vector_length(MeasureKind::WegdvmCc) == 2278);
  CHECK(is_matrix_measure(MeasureKind::Wegdvm));
  CHECK_FALSE(is_matrix_measure(MeasureKind::WegdvmCc));
}
