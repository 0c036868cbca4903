#pragma once

// Synthetic labeled corpora for the classifier tests.

#include <algorithm>
#include <random>
#include <string>

#include "wgraphlet/logreg.hpp"

namespace wgraphlet::testing {

/// `per_class` Gaussian samples around each of `classes` well separated
/// centers in `features` dimensions (unit noise, center spacing `spread`).
inline LabeledDataset gaussian_blobs(int classes, int per_class, int features, double spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd centers(classes, features);
  for (Eigen::Index i = 0; i < centers.size(); ++i) centers.data()[i] = spread * normal(rng);
  LabeledDataset d;
  d.features.resize(classes * per_class, features);
  for (int c = 0; c < classes; ++c) d.class_names.push_back("class" + std::to_string(c));
  for (int i = 0; i < classes * per_class; ++i) {
    const int c = i % classes;
    d.labels.push_back(c);
    d.ids.push_back("s" + std::to_string(i));
    for (int j = 0; j < features; ++j) d.features(i, j) = centers(c, j) + normal(rng);
  }
  return d;
}

inline LabeledDataset shuffled_labels(LabeledDataset d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::shuffle(d.labels.begin(), d.labels.end(), rng);
  return d;
}

}  // namespace wgraphlet::testing
