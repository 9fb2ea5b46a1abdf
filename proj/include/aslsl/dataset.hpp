#pragma once

#include <string>
#include <vector>

#include "aslsl/types.hpp"

namespace aslsl {

// One modality: a feature-by-instance matrix plus a per-instance presence
// flag. Columns of absent instances are kept zeroed so that multiplying by
// the presence mask is a no-op on stored data.
struct ViewBlock {
    int view_id = 0;
    Matrix features;                 // d_v x n
    std::vector<std::uint8_t> presence; // length n, 1 = instance observed

    Eigen::Index dim() const { return features.rows(); }
    Eigen::Index n() const { return features.cols(); }
    Eigen::Index present_count() const;
};

// Binary label indicators, one row per label dimension, one column per
// instance. Labels are complete: every instance is labeled in every row.
struct LabelMatrix {
    Matrix values; // k x n, entries in {0,1}

    Eigen::Index k() const { return values.rows(); }
    Eigen::Index n() const { return values.cols(); }
};

struct MultiViewDataset {
    std::string name;
    std::vector<ViewBlock> views;
    LabelMatrix labels;
    std::vector<int> groups; // optional subject ids, empty when absent

    Eigen::Index n() const { return labels.n(); }
    Eigen::Index m() const { return static_cast<Eigen::Index>(views.size()); }
    Eigen::Index k() const { return labels.k(); }
    std::vector<Eigen::Index> dims() const;
    Eigen::Index total_features() const;
};

struct LoadOptions {
    // Shift each feature row by its minimum over present instances so all
    // stored values are non-negative. Without it, negative entries are
    // rejected: the multiplicative updates assume non-negative data.
    bool shift_nonneg = false;
    // Per-feature standardization over present instances (z-score followed
    // by a min-shift back into the non-negative range). Off by default.
    bool standardize = false;
};

// Loads a dataset from a JSON manifest referencing per-view CSV matrices, a
// label CSV and a mask CSV (one row per view). Validates all invariants;
// errors carry file, row and column. Warnings (constant label rows) go to
// stderr.
MultiViewDataset load_dataset(const std::string& manifest_path, const LoadOptions& opts = {});

// Writes the dataset in the manifest format under dir/; returns the manifest
// path. A load of the result reproduces the dataset bit-identically.
std::string save_dataset(const MultiViewDataset& ds, const std::string& dir);

// The n x n diagonal presence indicator of a view, materialized as a dense
// diagonal matrix.
Matrix mask_matrix(const ViewBlock& view);

// Zeroes feature columns of absent instances, in place.
void zero_absent_columns(ViewBlock& view);

// Restriction of the dataset to a subset of instances, in the given order.
MultiViewDataset subset_instances(const MultiViewDataset& ds, const std::vector<int>& indices);

// Concatenates all views into one feature-by-instance matrix, view by view.
Matrix concat_features(const MultiViewDataset& ds);

// Structural validation shared by load paths: consistent instance counts,
// binary labels, non-negative present entries (unless shifting already ran),
// every instance present in at least one view. Throws on violations and
// returns human-readable warnings.
std::vector<std::string> validate_dataset(const MultiViewDataset& ds);

} // namespace aslsl
