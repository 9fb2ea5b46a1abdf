#pragma once

#include "aslsl/dataset.hpp"
#include "aslsl/types.hpp"

namespace aslsl {

// Heat-kernel affinity graph over label columns, with its degree vector and
// Laplacian. Two instances are connected when either is among the other's q
// nearest label columns.
struct LabelGraph {
    Matrix affinity;  // n x n, symmetric, zero diagonal
    Vector degree;    // row sums of affinity
    Matrix laplacian; // diag(degree) - affinity
    int neighbors_q = 0;
    double sigma = 1.0;

    Eigen::Index n() const { return affinity.rows(); }

    // Edgeless graph on n instances; the quadratic form is identically zero.
    static LabelGraph empty(Eigen::Index n);
};

// Builds the graph from label columns. Distance ties are broken by ascending
// instance index and a column is never its own neighbor. Requires q in
// [1, n) and sigma > 0.
LabelGraph build_label_graph(const LabelMatrix& labels, int q, double sigma);

// Tr(U^T L U), the smoothness of U over the graph. Equals half the
// affinity-weighted sum of squared row differences of U.
double laplacian_quadratic(const Matrix& u, const LabelGraph& graph);

} // namespace aslsl
