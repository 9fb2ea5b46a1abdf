#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aslsl/dataset.hpp"
#include "aslsl/label_graph.hpp"
#include "aslsl/types.hpp"

namespace aslsl {

struct Hyperparams {
    double lambda = 1.0; // label reconstruction weight
    double eta = 1.0;    // graph smoothness weight
    double delta = 1.0;  // row-sparsity weight on the projections
    double gamma = 2.0;  // view-weight exponent, strictly > 1
    int max_iters = 500;
    double rel_tol = 1e-6;
    double eps_div = 1e-12;  // guard added to multiplicative denominators
    double eps_norm = 1e-12; // smoothing inside the row-norm reweighting

    void validate() const; // throws std::invalid_argument on bad values
};

// Factor state of the solver. All entries stay non-negative across updates
// and the view weights stay on the simplex.
struct AslslModel {
    std::vector<Matrix> projections; // per view, d_v x k
    Matrix latent;                   // n x k, shared across views and labels
    Matrix label_coef;               // k x k
    Vector view_weights;             // length m, sums to 1
    Hyperparams hyper;
};

struct ConvergenceTrace {
    // objective_values[0] is the value at initialization; one more entry per
    // completed sweep, so the size is iterations_run + 1.
    std::vector<double> objective_values;
    std::vector<std::vector<double>> per_view_residuals; // one row per sweep
    std::vector<Vector> weight_history;                  // view weights per sweep
    int iterations_run = 0;
    bool converged = false;
    int zero_cost_events = 0; // sweeps where a zero-cost view pinned the weights
};

struct FitOptions {
    bool adaptive_weights = true; // false pins the view weights at their init
};

// Per-view cost decomposition. Each view's cost is
//   residual^2 + lambda * label_sse + eta * graph_term + delta * sparsity
// and the objective is the weight^gamma combination of these costs.
struct ViewCosts {
    Vector cost;      // length m
    Vector residual;  // masked reconstruction residual norm per view
    double label_sse = 0.0;
    double graph_term = 0.0;
    Vector sparsity;  // sum of projection row norms per view
};

// Random non-negative initialization: factor entries i.i.d. uniform on
// (0, 1], view weights uniform 1/m. Deterministic given the seed. k_latent
// must equal the label dimension count.
AslslModel init_model(const MultiViewDataset& ds, Eigen::Index k_latent,
                      const Hyperparams& hyper, std::uint64_t seed);

ViewCosts view_costs(const AslslModel& model, const MultiViewDataset& ds, const LabelGraph& graph);

double objective(const AslslModel& model, const MultiViewDataset& ds, const LabelGraph& graph);

// One multiplicative update of every projection matrix.
void update_projections(AslslModel& model, const MultiViewDataset& ds);

// One multiplicative update of the shared latent matrix. The Laplacian is
// split into its degree and affinity parts so both sides of the ratio stay
// non-negative.
void update_latent(AslslModel& model, const MultiViewDataset& ds, const LabelGraph& graph);

// One multiplicative update of the label coefficient matrix.
void update_label_coef(AslslModel& model, const MultiViewDataset& ds);

// Closed-form view-weight update from the current per-view costs. Returns
// true when a zero-cost view forced the limiting solution (all weight split
// among zero-cost views).
bool update_view_weights(AslslModel& model, const MultiViewDataset& ds, const LabelGraph& graph);

// Alternating optimization: projections, latent, label coefficients, view
// weights per sweep, until the relative objective change drops below
// rel_tol or max_iters is hit. Throws if the objective leaves the finite
// range, which signals a data scale pathology.
std::pair<AslslModel, ConvergenceTrace> fit(const MultiViewDataset& ds, const LabelGraph& graph,
                                            const Hyperparams& hyper, std::uint64_t seed,
                                            const FitOptions& opts = {});

// Trace export: iteration, objective, per-view residuals, view weights.
void write_convergence_csv(const ConvergenceTrace& trace, const std::string& path);

} // namespace aslsl
