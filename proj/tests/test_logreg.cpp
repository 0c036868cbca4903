#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include <json.hpp>

#include "support/datasets.hpp"
#include "wgraphlet/error.hpp"
#include "wgraphlet/logreg.hpp"

using namespace wgraphlet;

TEST_CASE("objective gradient matches central differences") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  const auto data = testing::gaussian_blobs(3, 6, 4, 1.0, 5);
  const Eigen::MatrixXd z = Standardizer::fit(data.features).apply(data.features);
  const SoftmaxObjective objective(z, data.labels, 3, 0.7);
  Eigen::VectorXd theta(objective.parameter_count());
  for (auto& t : theta) t = 0.5 * normal(rng);
  Eigen::VectorXd grad;
  const double f = objective.value_and_gradient(theta, grad);
  CHECK(f == doctest::Approx(objective.value(theta)).epsilon(1e-14));
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    const double h = 1e-6;
    Eigen::VectorXd plus = theta, minus = theta;
    plus(k) += h;
    minus(k) -= h;
    const double numeric = (objective.value(plus) - objective.value(minus)) / (2 * h);
    CHECK(grad(k) == doctest::Approx(numeric).epsilon(1e-6));
  }
}

TEST_CASE("objective at zero is N log C") {
  const auto data = testing::gaussian_blobs(4, 5, 3, 1.0, 1);
  const SoftmaxObjective objective(data.features, data.labels, 4, 1.0);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(objective.parameter_count());
  CHECK(objective.value(zero) == doctest::Approx(20 * std::log(4.0)));
}

TEST_CASE("fit converges with a monotone objective") {
  const auto data = testing::gaussian_blobs(3, 30, 10, 1.5, 2);
  const auto model = fit(data, {.lambda = 1.0, .record_trace = true});
  CHECK(model.converged);
  CHECK(model.gradient_norm <= 1e-6);
  REQUIRE(model.objective_trace.size() >= 2);
  for (std::size_t i = 1; i < model.objective_trace.size(); ++i)
    CHECK(model.objective_trace[i] <= model.objective_trace[i - 1]);
  const auto predicted = predict(model, data.features);
  int wrong = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) wrong += predicted[i] != data.labels[i];
  CHECK(wrong <= 2);
  CHECK(predict(model, Eigen::RowVectorXd(data.features.row(0))) == predicted[0]);
}

TEST_CASE("constant features are standardized to zero and carry no weight") {
  auto data = testing::gaussian_blobs(2, 10, 3, 2.0, 4);
  data.features.col(1).setConstant(7.0);
  const auto s = Standardizer::fit(data.features);
  CHECK(s.constant(1));
  CHECK(s.apply(data.features).col(1).isZero());
  const auto model = fit(data);
  CHECK(model.weights.col(1).isZero());
}

TEST_CASE("prediction ties resolve to the smallest class id") {
  TrainedModel model;
  model.weights = Eigen::MatrixXd::Zero(3, 2);
  model.intercepts = Eigen::VectorXd::Zero(3);
  model.standardizer = Standardizer::fit(Eigen::MatrixXd::Random(5, 2));
  CHECK(predict(model, Eigen::RowVectorXd(Eigen::RowVectorXd::Zero(2))) == 0);
  model.intercepts << -1.0, 2.0, 2.0;
  CHECK(predict(model, Eigen::RowVectorXd(Eigen::RowVectorXd::Zero(2))) == 1);
}

TEST_CASE("stratified folds are balanced, complete and seeded") {
  std::vector<int> labels;
  for (int i = 0; i < 53; ++i) labels.push_back(i % 7 == 0 ? 2 : i % 3 == 0 ? 1 : 0);
  const auto plan = stratified_kfold(labels, 5, 42);
  std::map<std::pair<int, int>, int> per_cell;
  std::vector<int> per_fold(5, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    REQUIRE(plan.fold_of[i] >= 0);
    REQUIRE(plan.fold_of[i] < 5);
    ++per_cell[{labels[i], plan.fold_of[i]}];
    ++per_fold[plan.fold_of[i]];
  }
  for (int c = 0; c < 3; ++c) {
    int lo = 1 << 30, hi = 0;
    for (int f = 0; f < 5; ++f) {
      lo = std::min(lo, per_cell[{c, f}]);
      hi = std::max(hi, per_cell[{c, f}]);
    }
    CHECK(hi - lo <= 1);
  }
  CHECK(*std::max_element(per_fold.begin(), per_fold.end()) - *std::min_element(per_fold.begin(), per_fold.end()) <=
        1);
  std::size_t covered = 0;
  for (int f = 0; f < 5; ++f) {
    const auto test = plan.test_rows(f);
    const auto train = plan.train_rows(f);
    CHECK(test.size() + train.size() == labels.size());
    covered += test.size();
  }
  CHECK(covered == labels.size());
  CHECK(stratified_kfold(labels, 5, 42).fold_of == plan.fold_of);
  CHECK(stratified_kfold(labels, 5, 43).fold_of != plan.fold_of);
}

TEST_CASE("small classes need explicit permission") {
  const std::vector<int> labels{0, 0, 0, 0, 0, 1, 1};
  CHECK_THROWS_AS(stratified_kfold(labels, 5, 0), InputError);
  CHECK_NOTHROW(stratified_kfold(labels, 5, 0, true));
  CHECK_THROWS_AS(stratified_kfold(labels, 1, 0), InputError);
}

TEST_CASE("datasets with one class are rejected") {
  auto data = testing::gaussian_blobs(2, 5, 2, 1.0, 0);
  data.class_names.pop_back();
  std::fill(data.labels.begin(), data.labels.end(), 0);
  CHECK_THROWS_WITH_AS(cross_validate(data, {}), doctest::Contains("C >= 2"), InputError);
}

TEST_CASE("cross-validation on separable data, and the report schema") {
  const auto data = testing::gaussian_blobs(3, 40, 12, 2.0, 7);
  const auto serial = cross_validate(data, {.folds = 5, .seed = 3});
  const auto parallel = cross_validate(data, {.folds = 5, .seed = 3, .workers = 3});
  CHECK(serial.mean_error < 0.05);
  CHECK(serial.to_json() == parallel.to_json());

  auto report = serial;
  report.dataset = "toy";
  report.measure = "graphlet35";
  const auto json = nlohmann::json::parse(report.to_json());
  for (const char* key : {"dataset", "measure", "classifier", "seed", "lambda", "folds", "mean_error"})
    CHECK(json.contains(key));
  CHECK(json["classifier"] == "logreg");
  CHECK(json["folds"].size() == 5);
  CHECK(json["folds"][0].contains("index"));
  CHECK(json["folds"][0].contains("size"));
  CHECK(json["folds"][0].contains("error"));
  std::size_t total = 0;
  for (const auto& f : serial.folds) total += f.size;
  CHECK(total == data.sample_count());
}
