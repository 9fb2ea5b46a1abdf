#pragma once

#include "aslsl/dataset.hpp"
#include "aslsl/types.hpp"

namespace aslsl {

// ML-KNN: per-label Bayesian decision from k-nearest-neighbor label counts.
// Neighbor search is brute-force Euclidean over feature columns; exact
// distance ties resolve by ascending training index.
struct MlknnModel {
  int k_neighbors = 10;
  double smoothing = 1.0;
  Matrix train_features;  // d x n
  Matrix train_labels;    // k x n, binary
  Vector prior_present;   // P(H_j)
  Vector prior_absent;    // P(!H_j); sums with prior_present to 1 exactly
  Matrix post_present;    // k x (k_neighbors+1), P(c neighbors labeled | H_j)
  Matrix post_absent;     // k x (k_neighbors+1), P(c neighbors labeled | !H_j)
};

struct MlknnPrediction {
  Matrix predictions;   // k x n_query, binary
  Matrix confidences;   // k x n_query, in [0,1]
};

MlknnModel train_mlknn(const Matrix& features, const LabelMatrix& labels,
                       int k_neighbors = 10, double smoothing = 1.0);

// Predict 1 when P(H)P(c|H) >= P(!H)P(c|!H); confidence is the normalized
// posterior mass of the positive hypothesis.
MlknnPrediction predict_mlknn(const MlknnModel& model, const Matrix& query_features);

}  // namespace aslsl
