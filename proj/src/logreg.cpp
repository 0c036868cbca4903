#include "wgraphlet/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <limits>
#include <random>

#include <spdlog/spdlog.h>

#include <json.hpp>

#include "wgraphlet/error.hpp"

namespace wgraphlet {

void LabeledDataset::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size())
    throw InputError("feature rows and labels differ in count");
  if (!ids.empty() && ids.size() != labels.size()) throw InputError("ids and labels differ in count");
  if (class_count() < 2) throw InputError("C >= 2 required; dataset has " + std::to_string(class_count()) + " class(es)");
  if (!features.allFinite()) throw InputError("features contain non-finite values");
  std::vector<std::size_t> per_class(class_names.size(), 0);
  for (int y : labels) {
    if (y < 0 || y >= class_count()) throw InputError("label id out of range");
    ++per_class[y];
  }
  for (std::size_t c = 0; c < per_class.size(); ++c)
    if (per_class[c] == 0) throw InputError("class '" + class_names[c] + "' has no samples");
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
  LabeledDataset out;
  out.class_names = class_names;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(labels[rows[i]]);
    if (!ids.empty()) out.ids.push_back(ids[rows[i]]);
  }
  return out;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
  Standardizer s;
  const auto n = static_cast<double>(x.rows());
  s.mean = x.colwise().mean();
  s.scale = ((x.rowwise() - s.mean).array().square().colwise().sum() / n).sqrt().matrix();
  s.constant.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    s.constant(j) = (x.col(j).array() == x(0, j)).all() || !(s.scale(j) > 0.0);
    if (s.constant(j)) s.scale(j) = 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd z = (x.rowwise() - mean).array().rowwise() / scale.array();
  for (Eigen::Index j = 0; j < z.cols(); ++j)
    if (constant(j)) z.col(j).setZero();
  return z;
}

SoftmaxObjective::SoftmaxObjective(const Eigen::MatrixXd& z, std::span<const int> labels, int classes,
                                   double lambda)
    : z_(z), onehot_(Eigen::MatrixXd::Zero(z.rows(), classes)), classes_(classes), features_(z.cols()),
      lambda_(lambda) {
  for (std::size_t i = 0; i < labels.size(); ++i) onehot_(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
}

double SoftmaxObjective::value(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd unused(theta.size());
  return value_and_gradient(theta, unused);
}

double SoftmaxObjective::value_and_gradient(const Eigen::VectorXd& theta, Eigen::VectorXd& gradient) const {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> w(theta.data(), classes_, features_);
  const auto b = theta.tail(classes_);

  Eigen::MatrixXd scores = z_ * w.transpose();
  scores.rowwise() += b.transpose();
  const Eigen::VectorXd top = scores.rowwise().maxCoeff();
  Eigen::MatrixXd prob = (scores.colwise() - top).array().exp();
  const Eigen::VectorXd norm = prob.rowwise().sum();
  const Eigen::VectorXd log_norm = top.array() + norm.array().log();

  const double loss = (log_norm - (scores.array() * onehot_.array()).rowwise().sum().matrix()).sum();
  const double value = loss + 0.5 * lambda_ * w.squaredNorm();

  prob = prob.array().colwise() / norm.array();
  const Eigen::MatrixXd residual = prob - onehot_;
  gradient.resize(theta.size());
  Eigen::Map<RowMajor> gw(gradient.data(), classes_, features_);
  gw = residual.transpose() * z_ + lambda_ * w;
  gradient.tail(classes_) = residual.colwise().sum().transpose();
  return value;
}

namespace {

struct Minimum {
  Eigen::VectorXd theta;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

// Limited-memory BFGS with Armijo backtracking; every accepted step lowers
// the objective.
Minimum lbfgs(const SoftmaxObjective& objective, const FitOptions& options, std::vector<double>* trace) {
  constexpr int kHistory = 10;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(objective.parameter_count());
  Eigen::VectorXd grad;
  double f = objective.value_and_gradient(theta, grad);
  if (trace) trace->push_back(f);

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  Minimum out;

  for (int iter = 0;; ++iter) {
    out.gradient_norm = grad.norm();
    out.iterations = iter;
    if (out.gradient_norm <= options.tolerance) {
      out.converged = true;
      break;
    }
    if (iter >= options.max_iterations) break;

    // Two-loop recursion.
    Eigen::VectorXd q = grad;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    else q /= std::max(1.0, out.gradient_norm);
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Eigen::VectorXd direction = -q;
    double slope = grad.dot(direction);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      direction = -grad / std::max(1.0, out.gradient_norm);
      slope = grad.dot(direction);
    }

    double step = 1.0;
    Eigen::VectorXd next_theta, next_grad;
    double next_f = f;
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries, step *= 0.5) {
      next_theta = theta + step * direction;
      next_f = objective.value_and_gradient(next_theta, next_grad);
      if (std::isfinite(next_f) && next_f <= f + 1e-4 * step * slope && next_f < f) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no representable decrease left

    Eigen::VectorXd s = next_theta - theta;
    Eigen::VectorXd y = next_grad - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (s_hist.size() == kHistory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    theta = std::move(next_theta);
    grad = std::move(next_grad);
    f = next_f;
    if (trace) trace->push_back(f);
  }
  out.theta = std::move(theta);
  return out;
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t range) {
  // Debiased modulo: reject the low remainder band.
  const std::uint64_t threshold = (0 - range) % range;
  std::uint64_t x;
  do x = rng();
  while (x < threshold);
  return x % range;
}

}  // namespace

TrainedModel fit(const LabeledDataset& train, const FitOptions& options) {
  train.validate();
  if (!(options.lambda > 0.0)) throw InputError("lambda must be positive");
  if (train.sample_count() < static_cast<std::size_t>(train.class_count()))
    throw InputError("need at least as many samples as classes");

  TrainedModel model;
  model.lambda = options.lambda;
  model.standardizer = Standardizer::fit(train.features);
  const Eigen::MatrixXd z = model.standardizer.apply(train.features);
  const SoftmaxObjective objective(z, train.labels, train.class_count(), options.lambda);

  const auto minimum = lbfgs(objective, options, options.record_trace ? &model.objective_trace : nullptr);
  if (!minimum.converged)
    spdlog::debug("logistic regression stopped at gradient norm {:.3g} after {} iterations",
                  minimum.gradient_norm, minimum.iterations);

  const Eigen::Index c = train.class_count();
  const Eigen::Index d = train.features.cols();
  model.weights.resize(c, d);
  for (Eigen::Index k = 0; k < c; ++k) model.weights.row(k) = minimum.theta.segment(k * d, d).transpose();
  for (Eigen::Index j = 0; j < d; ++j)
    if (model.standardizer.constant(j)) model.weights.col(j).setZero();
  model.intercepts = minimum.theta.tail(c);
  model.iterations = minimum.iterations;
  model.gradient_norm = minimum.gradient_norm;
  model.converged = minimum.converged;
  return model;
}

std::vector<int> predict(const TrainedModel& model, const Eigen::MatrixXd& features) {
  if (features.cols() != model.weights.cols())
    throw InputError("feature dimension " + std::to_string(features.cols()) + " does not match model dimension " +
                     std::to_string(model.weights.cols()));
  Eigen::MatrixXd scores = model.standardizer.apply(features) * model.weights.transpose();
  scores.rowwise() += model.intercepts.transpose();
  std::vector<int> out(static_cast<std::size_t>(features.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < scores.cols(); ++k)
      if (scores(i, k) > scores(i, best)) best = k;
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

int predict(const TrainedModel& model, const Eigen::RowVectorXd& features) {
  return predict(model, Eigen::MatrixXd(features)).front();
}

std::vector<std::size_t> FoldPlan::test_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] == fold) rows.push_back(i);
  return rows;
}

std::vector<std::size_t> FoldPlan::train_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] != fold) rows.push_back(i);
  return rows;
}

FoldPlan stratified_kfold(std::span<const int> labels, int folds, std::uint64_t seed, bool allow_small_classes) {
  if (folds < 2) throw InputError("need at least 2 folds");
  if (labels.empty()) throw InputError("no samples to fold");
  const int classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw InputError("negative label id");
    members[labels[i]].push_back(i);
  }

  FoldPlan plan;
  plan.folds = folds;
  plan.seed = seed;
  plan.fold_of.assign(labels.size(), -1);
  std::mt19937_64 rng(seed);
  std::size_t offset = 0;
  for (int c = 0; c < classes; ++c) {
    auto& rows = members[c];
    if (rows.empty()) continue;
    if (rows.size() < static_cast<std::size_t>(folds)) {
      if (!allow_small_classes)
        throw InputError("class " + std::to_string(c) + " has " + std::to_string(rows.size()) +
                         " samples, fewer than " + std::to_string(folds) + " folds");
      spdlog::warn("class {} has only {} samples; some folds will not contain it", c, rows.size());
    }
    for (std::size_t i = rows.size() - 1; i > 0; --i) std::swap(rows[i], rows[bounded(rng, i + 1)]);
    for (std::size_t i = 0; i < rows.size(); ++i) plan.fold_of[rows[i]] = static_cast<int>((offset + i) % folds);
    offset += rows.size();
  }
  return plan;
}

TrainedModel fit_fold(const LabeledDataset& data, const FoldPlan& plan, int fold, const FitOptions& options) {
  return fit(data.subset(plan.train_rows(fold)), options);
}

CVReport cross_validate(const LabeledDataset& data, const CVOptions& options) {
  data.validate();
  const FoldPlan plan = stratified_kfold(data.labels, options.folds, options.seed, options.allow_small_classes);

  auto run_fold = [&](int fold) {
    const auto test = plan.test_rows(fold);
    FoldResult result;
    result.index = fold;
    result.size = test.size();
    if (test.empty()) return result;
    const TrainedModel model = fit_fold(data, plan, fold, options.fit);
    const LabeledDataset held_out = data.subset(test);
    const auto predicted = predict(model, held_out.features);
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < test.size(); ++i) wrong += predicted[i] != held_out.labels[i];
    result.misclassified = wrong;
    result.error = static_cast<double>(wrong) / static_cast<double>(test.size());
    return result;
  };

  CVReport report;
  report.seed = options.seed;
  report.lambda = options.fit.lambda;
  report.folds.resize(static_cast<std::size_t>(options.folds));
  if (options.workers > 1) {
    std::vector<std::future<FoldResult>> pending;
    for (int f = 0; f < options.folds; ++f) pending.push_back(std::async(std::launch::async, run_fold, f));
    for (int f = 0; f < options.folds; ++f) report.folds[f] = pending[f].get();
  } else {
    for (int f = 0; f < options.folds; ++f) report.folds[f] = run_fold(f);
  }

  std::size_t wrong = 0;
  for (const auto& f : report.folds) wrong += f.misclassified;
  report.mean_error = static_cast<double>(wrong) / static_cast<double>(data.sample_count());
  return report;
}

std::string CVReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["dataset"] = dataset;
  doc["measure"] = measure;
  doc["classifier"] = classifier;
  doc["seed"] = seed;
  doc["lambda"] = lambda;
  doc["folds"] = nlohmann::ordered_json::array();
  for (const auto& f : folds) doc["folds"].push_back({{"index", f.index}, {"size", f.size}, {"error", f.error}});
  doc["mean_error"] = mean_error;
  return doc.dump(2) + "\n";
}

}  // namespace wgraphlet
