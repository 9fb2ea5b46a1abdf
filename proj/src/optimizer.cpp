#include "aslsl/optimizer.hpp"

#include <cassert>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "aslsl/matrix_io.hpp"
#include "aslsl/rng.hpp"

namespace aslsl {

void Hyperparams::validate() const {
    if (!(gamma > 1.0))
        throw std::invalid_argument("gamma must be strictly > 1 (the weight update is singular at 1)");
    if (lambda < 0.0 || eta < 0.0 || delta < 0.0)
        throw std::invalid_argument("lambda, eta and delta must be >= 0");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be > 0");
    if (!(eps_div > 0.0) || !(eps_norm > 0.0))
        throw std::invalid_argument("epsilon guards must be > 0");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
}

namespace {

// Feature matrices with absent columns explicitly zeroed. Fit never reads
// stored values at masked positions, whatever the caller put there.
std::vector<Matrix> masked_features(const MultiViewDataset& ds) {
    std::vector<Matrix> xm;
    xm.reserve(ds.views.size());
    for (const auto& v : ds.views) {
        Matrix x = v.features;
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            if (!v.presence[static_cast<std::size_t>(j)]) x.col(j).setZero();
        xm.push_back(std::move(x));
    }
    return xm;
}

// Latent rows of absent instances zeroed, one copy per view.
Matrix masked_latent(const Matrix& u, const ViewBlock& view) {
    Matrix um = u;
    for (Eigen::Index j = 0; j < um.rows(); ++j)
        if (!view.presence[static_cast<std::size_t>(j)]) um.row(j).setZero();
    return um;
}

Vector weight_powers(const AslslModel& model) {
    const auto m = model.view_weights.size();
    Vector w(m);
    for (Eigen::Index v = 0; v < m; ++v)
        w(v) = std::pow(model.view_weights(v), model.hyper.gamma);
    return w;
}

ViewCosts view_costs_impl(const AslslModel& model, const MultiViewDataset& ds,
                          const LabelGraph& graph, const std::vector<Matrix>& xm) {
    const Eigen::Index m = ds.m();
    ViewCosts c;
    c.cost.resize(m);
    c.residual.resize(m);
    c.sparsity.resize(m);
    c.label_sse = (ds.labels.values - model.label_coef * model.latent.transpose()).squaredNorm();
    c.graph_term = model.hyper.eta != 0.0 ? laplacian_quadratic(model.latent, graph) : 0.0;
    for (Eigen::Index v = 0; v < m; ++v) {
        const auto& view = ds.views[static_cast<std::size_t>(v)];
        const Matrix& q = model.projections[static_cast<std::size_t>(v)];
        Matrix resid = xm[static_cast<std::size_t>(v)] - q * model.latent.transpose();
        for (Eigen::Index j = 0; j < resid.cols(); ++j)
            if (!view.presence[static_cast<std::size_t>(j)]) resid.col(j).setZero();
        const double sse = resid.squaredNorm();
        c.residual(v) = std::sqrt(sse);
        double l21 = 0.0;
        for (Eigen::Index i = 0; i < q.rows(); ++i) l21 += q.row(i).norm();
        c.sparsity(v) = l21;
        c.cost(v) = sse + model.hyper.lambda * c.label_sse + model.hyper.eta * c.graph_term +
                    model.hyper.delta * l21;
    }
    return c;
}

void update_projections_impl(AslslModel& model, const MultiViewDataset& ds,
                             const std::vector<Matrix>& xm) {
    // The view weight scales every term of this subproblem, so it cancels
    // from the ratio.
    const double delta = model.hyper.delta;
    const double eps_div = model.hyper.eps_div;
    const double eps_norm = model.hyper.eps_norm;
    for (Eigen::Index v = 0; v < ds.m(); ++v) {
        const auto& view = ds.views[static_cast<std::size_t>(v)];
        Matrix& q = model.projections[static_cast<std::size_t>(v)];
        const Matrix um = masked_latent(model.latent, view);
        const Matrix numer = xm[static_cast<std::size_t>(v)] * um; // d_v x k
        const Matrix gram = um.transpose() * um;                   // k x k
        Matrix denom = q * gram;
        for (Eigen::Index i = 0; i < q.rows(); ++i) {
            const double scale = delta / (2.0 * std::sqrt(q.row(i).squaredNorm() + eps_norm));
            denom.row(i) += scale * q.row(i);
        }
        q = q.cwiseProduct(numer.cwiseQuotient((denom.array() + eps_div).matrix()));
    }
}

void update_latent_impl(AslslModel& model, const MultiViewDataset& ds, const LabelGraph& graph,
                        const std::vector<Matrix>& xm) {
    const Vector w = weight_powers(model);
    const double wsum = w.sum();
    const double label_w = model.hyper.lambda * wsum;
    const double graph_w = model.hyper.eta * wsum;

    Matrix numer = label_w * (ds.labels.values.transpose() * model.label_coef);
    Matrix denom = label_w * (model.latent * (model.label_coef.transpose() * model.label_coef));
    for (Eigen::Index v = 0; v < ds.m(); ++v) {
        if (w(v) == 0.0) continue;
        const auto& view = ds.views[static_cast<std::size_t>(v)];
        const Matrix& q = model.projections[static_cast<std::size_t>(v)];
        numer += w(v) * (xm[static_cast<std::size_t>(v)].transpose() * q);
        denom += w(v) * (masked_latent(model.latent, view) * (q.transpose() * q));
    }
    if (graph_w != 0.0) {
        numer += graph_w * (graph.affinity * model.latent);
        denom += graph_w * (graph.degree.asDiagonal() * model.latent);
    }
    model.latent =
        model.latent.cwiseProduct(numer.cwiseQuotient((denom.array() + model.hyper.eps_div).matrix()));
}

} // namespace

AslslModel init_model(const MultiViewDataset& ds, Eigen::Index k_latent, const Hyperparams& hyper,
                      std::uint64_t seed) {
    hyper.validate();
    if (k_latent < 1) throw std::invalid_argument("latent width must be >= 1");
    if (k_latent != ds.k())
        throw std::invalid_argument("latent width is tied to the label dimension count (" +
                                    std::to_string(ds.k()) + "), got " + std::to_string(k_latent));

    std::mt19937_64 rng(seed);
    auto fill = [&](Matrix& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = uniform_pos(rng);
    };

    AslslModel model;
    model.hyper = hyper;
    model.projections.resize(ds.views.size());
    for (Eigen::Index v = 0; v < ds.m(); ++v) {
        model.projections[static_cast<std::size_t>(v)].resize(ds.views[static_cast<std::size_t>(v)].dim(), k_latent);
        fill(model.projections[static_cast<std::size_t>(v)]);
    }
    model.latent.resize(ds.n(), k_latent);
    fill(model.latent);
    model.label_coef.resize(ds.k(), k_latent);
    fill(model.label_coef);
    model.view_weights = Vector::Constant(ds.m(), 1.0 / static_cast<double>(ds.m()));
    return model;
}

ViewCosts view_costs(const AslslModel& model, const MultiViewDataset& ds, const LabelGraph& graph) {
    return view_costs_impl(model, ds, graph, masked_features(ds));
}

double objective(const AslslModel& model, const MultiViewDataset& ds, const LabelGraph& graph) {
    const ViewCosts c = view_costs(model, ds, graph);
    double f = 0.0;
    for (Eigen::Index v = 0; v < c.cost.size(); ++v)
        f += std::pow(model.view_weights(v), model.hyper.gamma) * c.cost(v);
    return f;
}

void update_projections(AslslModel& model, const MultiViewDataset& ds) {
    update_projections_impl(model, ds, masked_features(ds));
}

void update_latent(AslslModel& model, const MultiViewDataset& ds, const LabelGraph& graph) {
    update_latent_impl(model, ds, graph, masked_features(ds));
}

void update_label_coef(AslslModel& model, const MultiViewDataset& ds) {
    // The weight sum and lambda multiply numerator and denominator alike.
    const Matrix numer = ds.labels.values * model.latent;
    const Matrix denom = model.label_coef * (model.latent.transpose() * model.latent);
    model.label_coef = model.label_coef.cwiseProduct(
        numer.cwiseQuotient((denom.array() + model.hyper.eps_div).matrix()));
}

namespace {

// Simplex solution for weights given fixed per-view costs. Zero-cost views
// take the limit: all weight, split equally among them.
bool weights_from_costs(const Vector& cost, double gamma, Vector& out) {
    const Eigen::Index m = cost.size();
    out.resize(m);
    Eigen::Index zero_count = 0;
    for (Eigen::Index v = 0; v < m; ++v)
        if (cost(v) <= 0.0) ++zero_count;
    if (zero_count > 0) {
        for (Eigen::Index v = 0; v < m; ++v)
            out(v) = cost(v) <= 0.0 ? 1.0 / static_cast<double>(zero_count) : 0.0;
        return true;
    }
    // exponent 1/(1-gamma) is negative; work in logs to dodge overflow on
    // extreme cost ratios
    const double p = 1.0 / (1.0 - gamma);
    Vector logs(m);
    for (Eigen::Index v = 0; v < m; ++v) logs(v) = p * std::log(cost(v));
    const double mx = logs.maxCoeff();
    double norm = 0.0;
    for (Eigen::Index v = 0; v < m; ++v) {
        out(v) = std::exp(logs(v) - mx);
        norm += out(v);
    }
    out /= norm;
    return false;
}

} // namespace

bool update_view_weights(AslslModel& model, const MultiViewDataset& ds, const LabelGraph& graph) {
    const ViewCosts c = view_costs(model, ds, graph);
    return weights_from_costs(c.cost, model.hyper.gamma, model.view_weights);
}

std::pair<AslslModel, ConvergenceTrace> fit(const MultiViewDataset& ds, const LabelGraph& graph,
                                            const Hyperparams& hyper, std::uint64_t seed,
                                            const FitOptions& opts) {
    AslslModel model = init_model(ds, ds.k(), hyper, seed);
    const std::vector<Matrix> xm = masked_features(ds);

    ConvergenceTrace trace;
    auto sweep_objective = [&](const ViewCosts& c) {
        double f = 0.0;
        for (Eigen::Index v = 0; v < c.cost.size(); ++v)
            f += std::pow(model.view_weights(v), hyper.gamma) * c.cost(v);
        return f;
    };

    double prev = sweep_objective(view_costs_impl(model, ds, graph, xm));
    if (!std::isfinite(prev))
        throw std::runtime_error("objective is non-finite at initialization; check the data scale");
    trace.objective_values.push_back(prev);

    for (int iter = 1; iter <= hyper.max_iters; ++iter) {
        update_projections_impl(model, ds, xm);
        update_latent_impl(model, ds, graph, xm);
        update_label_coef(model, ds);
        const ViewCosts c = view_costs_impl(model, ds, graph, xm);
        if (opts.adaptive_weights) {
            if (weights_from_costs(c.cost, hyper.gamma, model.view_weights)) ++trace.zero_cost_events;
        }
        const double f = sweep_objective(c);
        if (!std::isfinite(f))
            throw std::runtime_error("objective became non-finite at iteration " + std::to_string(iter) +
                                     "; check the data scale");
#ifndef NDEBUG
        for (const auto& q : model.projections) assert(q.minCoeff() >= 0.0);
        assert(model.latent.minCoeff() >= 0.0);
        assert(model.label_coef.minCoeff() >= 0.0);
        assert(std::abs(model.view_weights.sum() - 1.0) < 1e-10);
#endif
        trace.objective_values.push_back(f);
        trace.per_view_residuals.emplace_back(c.residual.data(), c.residual.data() + c.residual.size());
        trace.weight_history.push_back(model.view_weights);
        trace.iterations_run = iter;
        if (std::abs(prev - f) <= hyper.rel_tol * std::max(std::abs(prev), 1e-30)) {
            trace.converged = true;
            break;
        }
        prev = f;
    }
    return {std::move(model), std::move(trace)};
}

void write_convergence_csv(const ConvergenceTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open file for writing");
    const std::size_t m = trace.per_view_residuals.empty() ? 0 : trace.per_view_residuals.front().size();
    out << "iteration,objective";
    for (std::size_t v = 0; v < m; ++v) out << ",residual_" << v;
    for (std::size_t v = 0; v < m; ++v) out << ",weight_" << v;
    out << '\n';
    for (int t = 0; t < trace.iterations_run; ++t) {
        out << (t + 1) << ',' << format_double(trace.objective_values[static_cast<std::size_t>(t) + 1]);
        for (std::size_t v = 0; v < m; ++v)
            out << ',' << format_double(trace.per_view_residuals[static_cast<std::size_t>(t)][v]);
        for (std::size_t v = 0; v < m; ++v)
            out << ',' << format_double(trace.weight_history[static_cast<std::size_t>(t)](static_cast<Eigen::Index>(v)));
        out << '\n';
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

} // namespace aslsl
