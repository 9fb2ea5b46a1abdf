#pragma once

#include <cstdint>
#include <vector>

#include "aslsl/dataset.hpp"
#include "aslsl/types.hpp"

namespace aslsl {

// Synthetic multi-view generator. Labels and the planted informative feature
// rows are driven by one shared nonnegative latent matrix, so recovering the
// planted rows is a meaningful selection target; all other rows are noise.
struct SyntheticSpec {
  Eigen::Index n = 300;
  Eigen::Index m = 3;
  Eigen::Index k = 3;
  std::vector<Eigen::Index> dims;  // per-view feature counts; empty -> 50 each
  Eigen::Index informative_per_view = 5;
  double noise_level = 0.1;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  MultiViewDataset dataset;
  std::vector<std::vector<Eigen::Index>> informative;  // planted rows per view
};

SyntheticData generate_synthetic(const SyntheticSpec& spec);

struct MissingnessSpec {
  double ratio = 0.0;  // in [0, 0.5]
  std::uint64_t seed = 0;
};

// Marks floor(ratio * n) uniformly chosen instances absent in each view
// independently and zeroes their columns. Resamples (bounded) until every
// instance keeps at least one present view.
MultiViewDataset inject_missingness(const MultiViewDataset& ds,
                                    const MissingnessSpec& spec);

struct SplitResult {
  MultiViewDataset train;
  MultiViewDataset test;
  std::vector<int> train_indices;  // ascending
  std::vector<int> test_indices;   // ascending
};

// Instance-level random split; switches to group-wise splitting when the
// dataset carries a grouping column (no group spans both partitions).
SplitResult split_subjects(const MultiViewDataset& ds, double train_fraction,
                           std::uint64_t seed);

}  // namespace aslsl
