#include "aslsl/label_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace aslsl {

LabelGraph LabelGraph::empty(Eigen::Index n) {
    LabelGraph g;
    g.affinity = Matrix::Zero(n, n);
    g.degree = Vector::Zero(n);
    g.laplacian = Matrix::Zero(n, n);
    return g;
}

LabelGraph build_label_graph(const LabelMatrix& labels, int q, double sigma) {
    const Eigen::Index n = labels.n();
    if (q < 1 || q >= n)
        throw std::invalid_argument("graph neighbor count q must satisfy 1 <= q < n (q=" +
                                    std::to_string(q) + ", n=" + std::to_string(n) + ")");
    if (!(sigma > 0.0))
        throw std::invalid_argument("graph sigma must be > 0");

    const Matrix& y = labels.values;
    Matrix sqdist(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        sqdist(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d2 = (y.col(i) - y.col(j)).squaredNorm();
            sqdist(i, j) = d2;
            sqdist(j, i) = d2;
        }
    }

    // q nearest neighbors of each column, self excluded, ties by index.
    std::vector<std::vector<Eigen::Index>> neighbors(static_cast<std::size_t>(n));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n - 1));
    for (Eigen::Index j = 0; j < n; ++j) {
        order.clear();
        for (Eigen::Index i = 0; i < n; ++i)
            if (i != j) order.push_back(i);
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return sqdist(a, j) < sqdist(b, j);
        });
        neighbors[static_cast<std::size_t>(j)].assign(order.begin(), order.begin() + q);
    }

    LabelGraph g;
    g.neighbors_q = q;
    g.sigma = sigma;
    g.affinity = Matrix::Zero(n, n);
    const double inv_s2 = 1.0 / (sigma * sigma);
    auto connect = [&](Eigen::Index i, Eigen::Index j) {
        const double w = std::exp(-sqdist(i, j) * inv_s2);
        g.affinity(i, j) = w;
        g.affinity(j, i) = w;
    };
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i : neighbors[static_cast<std::size_t>(j)])
            connect(i, j);

    g.degree = g.affinity.rowwise().sum();
    g.laplacian = Matrix(g.degree.asDiagonal()) - g.affinity;
    return g;
}

double laplacian_quadratic(const Matrix& u, const LabelGraph& graph) {
    if (u.rows() != graph.n())
        throw std::invalid_argument("laplacian_quadratic: U has " + std::to_string(u.rows()) +
                                    " rows, graph has " + std::to_string(graph.n()));
    return (u.transpose() * graph.laplacian * u).trace();
}

} // namespace aslsl
