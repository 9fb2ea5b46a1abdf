#include "aslsl/feature_ranking.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "aslsl/matrix_io.hpp"

namespace aslsl {

FeatureRanking rank_features(const AslslModel& model) {
  FeatureRanking r;
  for (std::size_t v = 0; v < model.projections.size(); ++v) {
    const Matrix& q = model.projections[v];
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
      r.scores.push_back({static_cast<int>(v), i, q.row(i).norm()});
    }
  }
  r.order.resize(r.scores.size());
  std::iota(r.order.begin(), r.order.end(), std::size_t{0});
  std::sort(r.order.begin(), r.order.end(),
            [&](std::size_t a, std::size_t b) {
              const FeatureScore& sa = r.scores[a];
              const FeatureScore& sb = r.scores[b];
              if (sa.score != sb.score) return sa.score > sb.score;
              if (sa.view_id != sb.view_id) return sa.view_id < sb.view_id;
              return sa.feature_index < sb.feature_index;
            });
  return r;
}

Eigen::Index selected_count(double fraction, Eigen::Index total) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw std::invalid_argument("selection fraction must lie in (0, 1]");
  }
  if (total <= 0) return 0;
  // The subtraction absorbs FP noise like 0.1 * 150 = 15.000000000000002,
  // which a bare ceil would round up to 16.
  auto count = static_cast<Eigen::Index>(
      std::ceil(fraction * static_cast<double>(total) - 1e-9));
  return std::clamp<Eigen::Index>(count, 1, total);
}

std::vector<std::size_t> select_entries(const FeatureRanking& ranking,
                                        double fraction,
                                        const SelectOptions& opts) {
  const auto total = static_cast<Eigen::Index>(ranking.scores.size());
  if (!opts.per_view_quota) {
    const Eigen::Index count = selected_count(fraction, total);
    return {ranking.order.begin(), ranking.order.begin() + count};
  }
  std::vector<Eigen::Index> dims;
  for (const FeatureScore& s : ranking.scores) {
    if (s.view_id >= static_cast<int>(dims.size())) dims.resize(s.view_id + 1, 0);
    ++dims[s.view_id];
  }
  std::vector<Eigen::Index> quota(dims.size());
  for (std::size_t v = 0; v < dims.size(); ++v) {
    quota[v] = dims[v] > 0 ? selected_count(fraction, dims[v]) : 0;
  }
  std::vector<std::size_t> chosen;
  std::vector<Eigen::Index> taken(dims.size(), 0);
  for (std::size_t idx : ranking.order) {
    const int v = ranking.scores[idx].view_id;
    if (taken[v] < quota[v]) {
      chosen.push_back(idx);
      ++taken[v];
    }
  }
  return chosen;
}

MultiViewDataset select_subset(const MultiViewDataset& ds,
                               const FeatureRanking& ranking,
                               double fraction,
                               const SelectOptions& opts) {
  if (ranking.scores.size() != static_cast<std::size_t>(ds.total_features())) {
    throw std::invalid_argument(
        "ranking does not cover the dataset's feature rows");
  }
  const std::vector<std::size_t> chosen = select_entries(ranking, fraction, opts);

  std::vector<std::vector<Eigen::Index>> keep(ds.m());
  for (std::size_t idx : chosen) {
    const FeatureScore& s = ranking.scores[idx];
    if (s.view_id < 0 || s.view_id >= static_cast<int>(ds.m()) ||
        s.feature_index >= ds.views[s.view_id].dim()) {
      throw std::invalid_argument("ranking entry outside dataset dimensions");
    }
    keep[s.view_id].push_back(s.feature_index);
  }
  MultiViewDataset out;
  out.name = ds.name;
  out.labels = ds.labels;
  out.groups = ds.groups;
  for (std::size_t v = 0; v < keep.size(); ++v) {
    std::sort(keep[v].begin(), keep[v].end());
    const ViewBlock& src = ds.views[v];
    ViewBlock block;
    block.view_id = src.view_id;
    block.presence = src.presence;
    block.features.resize(static_cast<Eigen::Index>(keep[v].size()), src.n());
    for (std::size_t r = 0; r < keep[v].size(); ++r) {
      block.features.row(static_cast<Eigen::Index>(r)) = src.features.row(keep[v][r]);
    }
    out.views.push_back(std::move(block));
  }
  return out;
}

void write_ranking_csv(const FeatureRanking& ranking, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "rank,view,feature_index,score\n";
  for (std::size_t r = 0; r < ranking.order.size(); ++r) {
    const FeatureScore& s = ranking.scores[ranking.order[r]];
    out << (r + 1) << ',' << s.view_id << ',' << s.feature_index << ','
        << format_double(s.score) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace aslsl
