#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace wgraphlet {

/// Feature matrix (N x D) with integer labels into `class_names`.
struct LabeledDataset {
  Eigen::MatrixXd features;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  std::vector<std::string> ids;

  int class_count() const { return static_cast<int>(class_names.size()); }
  std::size_t sample_count() const { return labels.size(); }
  /// Throws InputError on shape mismatch, non-finite values, C < 2 or an
  /// empty class.
  void validate() const;
  LabeledDataset subset(std::span<const std::size_t> rows) const;
};

/// Per-feature z-scoring estimated on training rows only. Constant
/// features map to 0.
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;
  Eigen::Array<bool, 1, Eigen::Dynamic> constant;

  static Standardizer fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

/// Multinomial softmax regression, C x D weights and C intercepts on
/// standardized features.
struct TrainedModel {
  Eigen::MatrixXd weights;
  Eigen::VectorXd intercepts;
  Standardizer standardizer;
  double lambda = 1.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  /// Objective value after each accepted step (when requested).
  std::vector<double> objective_trace;

  int class_count() const { return static_cast<int>(intercepts.size()); }
};

struct FitOptions {
  double lambda = 1.0;
  double tolerance = 1e-6;
  int max_iterations = 5000;
  bool record_trace = false;
};

/// Cross-entropy summed over samples plus (lambda/2)||W||^2 (intercepts
/// unpenalized) over parameters theta = [vec_rowmajor(W); b].
class SoftmaxObjective {
 public:
  SoftmaxObjective(const Eigen::MatrixXd& z, std::span<const int> labels, int classes, double lambda);

  Eigen::Index parameter_count() const { return classes_ * (features_ + 1); }
  double value(const Eigen::VectorXd& theta) const;
  double value_and_gradient(const Eigen::VectorXd& theta, Eigen::VectorXd& gradient) const;

 private:
  const Eigen::MatrixXd& z_;
  Eigen::MatrixXd onehot_;
  Eigen::Index classes_;
  Eigen::Index features_;
  double lambda_;
};

/// L-BFGS from zero until ||gradient||_2 <= tolerance.
TrainedModel fit(const LabeledDataset& train, const FitOptions& options = {});

/// Raw feature rows in, argmax class per row (ties to the smallest id).
std::vector<int> predict(const TrainedModel& model, const Eigen::MatrixXd& features);
int predict(const TrainedModel& model, const Eigen::RowVectorXd& features);

/// Fold id per sample.
struct FoldPlan {
  int folds = 0;
  std::uint64_t seed = 0;
  std::vector<int> fold_of;

  std::vector<std::size_t> test_rows(int fold) const;
  std::vector<std::size_t> train_rows(int fold) const;
};

/// Shuffles each class (classes in id order) with mt19937_64(seed) and
/// deals its members round-robin across folds, continuing from where the
/// previous class stopped. Classes with fewer than `folds` members are an
/// InputError unless `allow_small_classes`.
FoldPlan stratified_kfold(std::span<const int> labels, int folds, std::uint64_t seed,
                          bool allow_small_classes = false);

struct FoldResult {
  int index = 0;
  std::size_t size = 0;
  std::size_t misclassified = 0;
  double error = 0.0;
};

struct CVReport {
  std::string dataset;
  std::string measure;
  std::string classifier = "logreg";
  std::uint64_t seed = 0;
  double lambda = 1.0;
  std::vector<FoldResult> folds;
  double mean_error = 0.0;

  std::string to_json() const;
};

struct CVOptions {
  int folds = 5;
  std::uint64_t seed = 0;
  FitOptions fit;
  bool allow_small_classes = false;
  unsigned workers = 1;
};

/// Model trained on every fold but `fold`.
TrainedModel fit_fold(const LabeledDataset& data, const FoldPlan& plan, int fold, const FitOptions& options);

/// Stratified k-fold misclassification rate; mean_error weights folds by
/// size.
CVReport cross_validate(const LabeledDataset& data, const CVOptions& options);

}  // namespace wgraphlet
