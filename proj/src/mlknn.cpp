#include "aslsl/mlknn.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace aslsl {

namespace {

// Indices of the k training columns nearest to `query`, ties by index.
// `exclude` skips one training column (self-exclusion during training).
std::vector<Eigen::Index> nearest(const Matrix& train, const Vector& query,
                                  int k, Eigen::Index exclude) {
  std::vector<std::pair<double, Eigen::Index>> dist;
  dist.reserve(train.cols());
  for (Eigen::Index j = 0; j < train.cols(); ++j) {
    if (j == exclude) continue;
    dist.emplace_back((train.col(j) - query).squaredNorm(), j);
  }
  const auto mid = dist.begin() + std::min<std::ptrdiff_t>(k, dist.size());
  std::partial_sort(dist.begin(), mid, dist.end());
  std::vector<Eigen::Index> out;
  out.reserve(k);
  for (auto it = dist.begin(); it != mid; ++it) out.push_back(it->second);
  return out;
}

}  // namespace

MlknnModel train_mlknn(const Matrix& features, const LabelMatrix& labels,
                       int k_neighbors, double smoothing) {
  const Eigen::Index n = features.cols();
  const Eigen::Index k = labels.k();
  if (labels.n() != n) {
    throw std::invalid_argument("feature and label instance counts differ");
  }
  if (k_neighbors < 1) throw std::invalid_argument("k_neighbors must be >= 1");
  if (k_neighbors >= n) {
    throw std::invalid_argument("k_neighbors must be smaller than the training set");
  }
  if (smoothing < 0.0) throw std::invalid_argument("smoothing must be >= 0");
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double y = labels.values(j, i);
      if (y != 0.0 && y != 1.0) {
        throw std::invalid_argument("training labels must be binary");
      }
    }
  }

  MlknnModel model;
  model.k_neighbors = k_neighbors;
  model.smoothing = smoothing;
  model.train_features = features;
  model.train_labels = labels.values;

  const double s = smoothing;
  model.prior_present.resize(k);
  model.prior_absent.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double pos = labels.values.row(j).sum();
    model.prior_present(j) = (s + pos) / (2.0 * s + static_cast<double>(n));
    // Complement rather than a second division so the pair sums to 1 exactly.
    model.prior_absent(j) = 1.0 - model.prior_present(j);
  }

  // Histogram over neighbor label counts, split by whether the instance
  // itself carries the label.
  const int bins = k_neighbors + 1;
  Matrix count_present = Matrix::Zero(k, bins);
  Matrix count_absent = Matrix::Zero(k, bins);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::vector<Eigen::Index> nb =
        nearest(features, features.col(i), k_neighbors, i);
    for (Eigen::Index j = 0; j < k; ++j) {
      int c = 0;
      for (Eigen::Index t : nb) c += labels.values(j, t) != 0.0 ? 1 : 0;
      if (labels.values(j, i) != 0.0) {
        count_present(j, c) += 1.0;
      } else {
        count_absent(j, c) += 1.0;
      }
    }
  }
  model.post_present.resize(k, bins);
  model.post_absent.resize(k, bins);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double tot_p = count_present.row(j).sum();
    const double tot_a = count_absent.row(j).sum();
    // With smoothing 0 an empty hypothesis class leaves no mass to normalize;
    // its prior is 0 as well, so a zero posterior keeps the products finite.
    const double den_p = s * bins + tot_p;
    const double den_a = s * bins + tot_a;
    for (int c = 0; c < bins; ++c) {
      model.post_present(j, c) = den_p > 0.0 ? (s + count_present(j, c)) / den_p : 0.0;
      model.post_absent(j, c) = den_a > 0.0 ? (s + count_absent(j, c)) / den_a : 0.0;
    }
  }
  return model;
}

MlknnPrediction predict_mlknn(const MlknnModel& model, const Matrix& query_features) {
  if (query_features.rows() != model.train_features.rows()) {
    throw std::invalid_argument("query feature dimension differs from training");
  }
  const Eigen::Index k = model.train_labels.rows();
  const Eigen::Index nq = query_features.cols();
  MlknnPrediction out;
  out.predictions.resize(k, nq);
  out.confidences.resize(k, nq);
  for (Eigen::Index q = 0; q < nq; ++q) {
    const std::vector<Eigen::Index> nb = nearest(
        model.train_features, query_features.col(q), model.k_neighbors, -1);
    for (Eigen::Index j = 0; j < k; ++j) {
      int c = 0;
      for (Eigen::Index t : nb) c += model.train_labels(j, t) != 0.0 ? 1 : 0;
      const double mass_present = model.prior_present(j) * model.post_present(j, c);
      const double mass_absent = model.prior_absent(j) * model.post_absent(j, c);
      const double denom = mass_present + mass_absent;
      // denom can only vanish with smoothing 0; ties predict positive.
      out.predictions(j, q) = mass_present >= mass_absent ? 1.0 : 0.0;
      out.confidences(j, q) = denom > 0.0 ? mass_present / denom : 0.5;
    }
  }
  return out;
}

}  // namespace aslsl
