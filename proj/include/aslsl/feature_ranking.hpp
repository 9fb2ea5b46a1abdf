#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aslsl/dataset.hpp"
#include "aslsl/optimizer.hpp"
#include "aslsl/types.hpp"

namespace aslsl {

struct FeatureScore {
  int view_id = 0;              // position of the view in the dataset
  Eigen::Index feature_index = 0;  // row within that view
  double score = 0.0;           // 2-norm of the projection row
};

// Global feature ordering induced by projection row norms.
// `order` indexes into `scores`, descending by score; ties resolve by
// (view_id, feature_index) ascending so the ordering is deterministic.
struct FeatureRanking {
  std::vector<FeatureScore> scores;  // one per (view, row), dataset order
  std::vector<std::size_t> order;
};

struct SelectOptions {
  bool per_view_quota = false;  // top ceil(fraction * d_v) per view instead of pooled
};

FeatureRanking rank_features(const AslslModel& model);

// ceil(fraction * total) with a guard against FP noise in the product,
// clamped to [1, total] for total >= 1.
Eigen::Index selected_count(double fraction, Eigen::Index total);

// Indices into ranking.scores for the selected subset, in ranking order.
std::vector<std::size_t> select_entries(const FeatureRanking& ranking,
                                        double fraction,
                                        const SelectOptions& opts = {});

// Restrict every view to its selected feature rows; masks and labels carry over.
MultiViewDataset select_subset(const MultiViewDataset& ds,
                               const FeatureRanking& ranking,
                               double fraction,
                               const SelectOptions& opts = {});

// Columns: rank,view,feature_index,score (header row included).
void write_ranking_csv(const FeatureRanking& ranking, const std::string& path);

}  // namespace aslsl
