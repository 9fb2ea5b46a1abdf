#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aslsl/dataset.hpp"
#include "aslsl/experiment.hpp"
#include "aslsl/feature_ranking.hpp"
#include "aslsl/label_graph.hpp"
#include "aslsl/matrix_io.hpp"
#include "aslsl/metrics.hpp"
#include "aslsl/mlknn.hpp"
#include "aslsl/optimizer.hpp"
#include "aslsl/rng.hpp"
#include "aslsl/simulation.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace aslsl;

std::string default_out_dir() {
  const char* env = std::getenv("ASLSL_OUT_DIR");
  return env != nullptr && *env != '\0' ? env : "aslsl_out";
}

void emit_error(const std::string& type, const std::string& message) {
  std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump()
            << std::endl;
}

json metrics_to_json(const MetricReport& r) {
  return {{"hamming_loss", r.hamming_loss},
          {"ranking_loss", r.ranking_loss},
          {"coverage", r.coverage},
          {"coverage_normalized", r.coverage_normalized},
          {"average_precision", r.average_precision},
          {"macro_f1", r.macro_f1},
          {"micro_f1", r.micro_f1}};
}

// Flag bundles shared by the model-fitting subcommands.
struct FitFlags {
  std::string manifest;
  std::string out = default_out_dir();
  double lambda = 1.0, eta = 1.0, delta = 1.0, gamma = 2.0;
  int max_iters = 500;
  double rel_tol = 1e-6;
  int graph_neighbors = 5;
  double graph_sigma = 1.0;
  std::uint64_t seed = 0;
  bool shift_nonneg = false;
  bool standardize = false;
};

void add_fit_flags(CLI::App* cmd, FitFlags& f) {
  cmd->add_option("--manifest", f.manifest, "Dataset manifest JSON")->required();
  cmd->add_option("--out", f.out, "Output directory (default $ASLSL_OUT_DIR or aslsl_out)");
  cmd->add_option("--lambda", f.lambda, "Label reconstruction weight");
  cmd->add_option("--eta", f.eta, "Graph smoothness weight");
  cmd->add_option("--delta", f.delta, "Row-sparsity weight");
  cmd->add_option("--gamma", f.gamma, "View-weight exponent (> 1)");
  cmd->add_option("--max-iters", f.max_iters, "Optimization sweep cap");
  cmd->add_option("--rel-tol", f.rel_tol, "Relative objective tolerance");
  cmd->add_option("--graph-neighbors", f.graph_neighbors, "Label graph neighbor count");
  cmd->add_option("--graph-sigma", f.graph_sigma, "Label graph kernel width");
  cmd->add_option("--seed", f.seed, "Initialization seed");
  cmd->add_flag("--shift-nonneg", f.shift_nonneg, "Shift feature rows non-negative on load");
  cmd->add_flag("--standardize", f.standardize, "Standardize feature rows on load");
}

struct FitOutcome {
  MultiViewDataset data;
  AslslModel model;
  ConvergenceTrace trace;
};

FitOutcome fit_from_flags(const FitFlags& f) {
  LoadOptions load;
  load.shift_nonneg = f.shift_nonneg;
  load.standardize = f.standardize;
  FitOutcome res;
  res.data = load_dataset(f.manifest, load);
  Hyperparams h;
  h.lambda = f.lambda;
  h.eta = f.eta;
  h.delta = f.delta;
  h.gamma = f.gamma;
  h.max_iters = f.max_iters;
  h.rel_tol = f.rel_tol;
  const LabelGraph graph =
      h.eta > 0.0
          ? build_label_graph(res.data.labels, f.graph_neighbors, f.graph_sigma)
          : LabelGraph::empty(res.data.n());
  std::tie(res.model, res.trace) = fit(res.data, graph, h, f.seed);
  return res;
}

void write_model(const AslslModel& model, const ConvergenceTrace& trace,
                 const std::string& out) {
  fs::create_directories(out);
  for (std::size_t v = 0; v < model.projections.size(); ++v) {
    write_csv_matrix((fs::path(out) / ("projection_" + std::to_string(v) + ".csv")).string(),
                     model.projections[v]);
  }
  write_csv_matrix((fs::path(out) / "latent.csv").string(), model.latent);
  write_csv_matrix((fs::path(out) / "label_coef.csv").string(), model.label_coef);
  write_csv_matrix((fs::path(out) / "alpha.csv").string(),
                   model.view_weights.transpose());
  write_convergence_csv(trace, (fs::path(out) / "convergence.csv").string());
}

json fit_summary(const ConvergenceTrace& trace, const std::string& out) {
  return {{"iterations", trace.iterations_run},
          {"converged", trace.converged},
          {"objective", trace.objective_values.back()},
          {"out", out}};
}

// Applies CLI overrides for `run`/`sweep` on top of a config file.
struct RunFlags {
  std::string config_path;
  std::string out = default_out_dir();
  std::string manifest;
  std::vector<double> ratios;
  std::vector<double> lambda, eta, delta, gamma;
  double fraction = 0.1, train_fraction = 0.7;
  int trials = 0;
  std::uint64_t base_seed = 0;
  int syn_n = 0, syn_m = 0, syn_k = 0, syn_informative = -1;
  std::vector<Eigen::Index> syn_dims;
  double syn_noise = -1.0;
  bool ablate_shared = false, ablate_graph = false, ablate_weights = false;
  int graph_neighbors = 0, knn_neighbors = 0;
  double graph_sigma = 0.0, knn_smoothing = -1.0;
  int max_iters = 0;
  double rel_tol = 0.0;
  bool per_view_quota = false, shift_nonneg = false, standardize = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config_path, "Experiment config JSON");
  cmd->add_option("--out", f.out, "Report directory (default $ASLSL_OUT_DIR or aslsl_out)");
  cmd->add_option("--manifest", f.manifest, "Dataset manifest (otherwise synthetic)");
  cmd->add_option("--ratios", f.ratios, "Missing ratios")->delimiter(',');
  cmd->add_option("--lambda", f.lambda, "Label weight grid")->delimiter(',');
  cmd->add_option("--eta", f.eta, "Graph weight grid")->delimiter(',');
  cmd->add_option("--delta", f.delta, "Sparsity weight grid")->delimiter(',');
  cmd->add_option("--gamma", f.gamma, "View exponent grid")->delimiter(',');
  cmd->add_option("--fraction", f.fraction, "Selected feature fraction");
  cmd->add_option("--train-fraction", f.train_fraction, "Training split fraction");
  cmd->add_option("--trials", f.trials, "Trial count");
  cmd->add_option("--base-seed", f.base_seed, "Base seed; trial t uses base+t");
  cmd->add_option("--synthetic-n", f.syn_n, "Synthetic instance count");
  cmd->add_option("--synthetic-m", f.syn_m, "Synthetic view count");
  cmd->add_option("--synthetic-k", f.syn_k, "Synthetic label count");
  cmd->add_option("--synthetic-dims", f.syn_dims, "Per-view feature counts")->delimiter(',');
  cmd->add_option("--synthetic-informative", f.syn_informative, "Planted rows per view");
  cmd->add_option("--synthetic-noise", f.syn_noise, "Synthetic noise level");
  cmd->add_flag("--ablate-shared-latent", f.ablate_shared, "Independent per-view fits");
  cmd->add_flag("--ablate-graph", f.ablate_graph, "Drop the label graph term");
  cmd->add_flag("--ablate-adaptive-weights", f.ablate_weights, "Pin view weights uniform");
  cmd->add_option("--graph-neighbors", f.graph_neighbors, "Label graph neighbor count");
  cmd->add_option("--graph-sigma", f.graph_sigma, "Label graph kernel width");
  cmd->add_option("--knn-neighbors", f.knn_neighbors, "ML-KNN neighbor count");
  cmd->add_option("--knn-smoothing", f.knn_smoothing, "ML-KNN smoothing");
  cmd->add_option("--max-iters", f.max_iters, "Optimization sweep cap");
  cmd->add_option("--rel-tol", f.rel_tol, "Relative objective tolerance");
  cmd->add_flag("--per-view-quota", f.per_view_quota, "Per-view selection quotas");
  cmd->add_flag("--shift-nonneg", f.shift_nonneg, "Shift feature rows non-negative on load");
  cmd->add_flag("--standardize", f.standardize, "Standardize feature rows on load");
}

ExperimentConfig config_from_run_flags(const CLI::App* cmd, const RunFlags& f) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) cfg = load_config(f.config_path);
  if (cmd->count("--manifest") > 0) cfg.manifest_path = f.manifest;
  if (cmd->count("--ratios") > 0) cfg.missing_ratios = f.ratios;
  if (cmd->count("--lambda") > 0) cfg.grid.lambda = f.lambda;
  if (cmd->count("--eta") > 0) cfg.grid.eta = f.eta;
  if (cmd->count("--delta") > 0) cfg.grid.delta = f.delta;
  if (cmd->count("--gamma") > 0) cfg.grid.gamma = f.gamma;
  if (cmd->count("--fraction") > 0) cfg.selection_fraction = f.fraction;
  if (cmd->count("--train-fraction") > 0) cfg.train_fraction = f.train_fraction;
  if (cmd->count("--trials") > 0) cfg.trials = f.trials;
  if (cmd->count("--base-seed") > 0) cfg.base_seed = f.base_seed;
  if (cmd->count("--synthetic-n") > 0) cfg.synthetic.n = f.syn_n;
  if (cmd->count("--synthetic-m") > 0) cfg.synthetic.m = f.syn_m;
  if (cmd->count("--synthetic-k") > 0) cfg.synthetic.k = f.syn_k;
  if (cmd->count("--synthetic-dims") > 0) cfg.synthetic.dims = f.syn_dims;
  if (cmd->count("--synthetic-informative") > 0) {
    cfg.synthetic.informative_per_view = f.syn_informative;
  }
  if (cmd->count("--synthetic-noise") > 0) cfg.synthetic.noise_level = f.syn_noise;
  if (cmd->count("--ablate-shared-latent") > 0) {
    cfg.ablation.disable_shared_latent = true;
  }
  if (cmd->count("--ablate-graph") > 0) cfg.ablation.disable_graph = true;
  if (cmd->count("--ablate-adaptive-weights") > 0) {
    cfg.ablation.disable_adaptive_weights = true;
  }
  if (cmd->count("--graph-neighbors") > 0) cfg.graph_neighbors = f.graph_neighbors;
  if (cmd->count("--graph-sigma") > 0) cfg.graph_sigma = f.graph_sigma;
  if (cmd->count("--knn-neighbors") > 0) cfg.knn_neighbors = f.knn_neighbors;
  if (cmd->count("--knn-smoothing") > 0) cfg.knn_smoothing = f.knn_smoothing;
  if (cmd->count("--max-iters") > 0) cfg.max_iters = f.max_iters;
  if (cmd->count("--rel-tol") > 0) cfg.rel_tol = f.rel_tol;
  if (cmd->count("--per-view-quota") > 0) cfg.per_view_quota = true;
  if (cmd->count("--shift-nonneg") > 0) cfg.load.shift_nonneg = true;
  if (cmd->count("--standardize") > 0) cfg.load.standardize = true;
  cfg.validate();
  return cfg;
}

// Grid keys the config file pins explicitly; sweeps fill the rest with the
// default grids instead of the single-combo fallback.
std::vector<std::string> config_file_grid_keys(const std::string& path) {
  std::vector<std::string> keys;
  if (path.empty()) return keys;
  std::ifstream in(path);
  if (!in) return keys;
  json root = json::parse(in, nullptr, false);
  if (root.is_discarded() || !root.is_object() || !root.contains("grid")) return keys;
  for (const auto& item : root["grid"].items()) keys.push_back(item.key());
  return keys;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Adaptive shared-latent feature selection for incomplete multi-view "
      "multi-label data, with an ML-KNN evaluation pipeline"};
  app.require_subcommand(1);
  std::function<int()> action;

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset");
  {
    struct {
      std::string out = default_out_dir();
      SyntheticSpec spec;
    } static g;
    gen->add_option("--out", g.out, "Dataset directory");
    gen->add_option("--n", g.spec.n, "Instance count");
    gen->add_option("--m", g.spec.m, "View count");
    gen->add_option("--k", g.spec.k, "Label count");
    gen->add_option("--dims", g.spec.dims, "Per-view feature counts")->delimiter(',');
    gen->add_option("--informative", g.spec.informative_per_view, "Planted rows per view");
    gen->add_option("--noise", g.spec.noise_level, "Noise level on planted rows");
    gen->add_option("--seed", g.spec.seed, "Generator seed");
    gen->callback([&] {
      action = [] {
        const SyntheticData data = generate_synthetic(g.spec);
        const std::string manifest = save_dataset(data.dataset, g.out);
        json planted = json::array();
        for (const auto& rows : data.informative) planted.push_back(rows);
        std::ofstream pf(fs::path(g.out) / "informative.json");
        pf << json{{"informative", planted}}.dump(2) << '\n';
        std::cout << json{{"manifest", manifest}}.dump() << std::endl;
        return 0;
      };
    });
  }

  // inject
  auto* inj = app.add_subcommand("inject", "Inject per-view missingness");
  {
    struct {
      std::string manifest;
      std::string out = default_out_dir();
      MissingnessSpec spec;
      bool shift_nonneg = false, standardize = false;
    } static g;
    inj->add_option("--manifest", g.manifest, "Dataset manifest JSON")->required();
    inj->add_option("--out", g.out, "Output dataset directory");
    inj->add_option("--ratio", g.spec.ratio, "Absent fraction per view")->required();
    inj->add_option("--seed", g.spec.seed, "Sampling seed");
    inj->add_flag("--shift-nonneg", g.shift_nonneg, "Shift feature rows non-negative on load");
    inj->add_flag("--standardize", g.standardize, "Standardize feature rows on load");
    inj->callback([&] {
      action = [] {
        LoadOptions load;
        load.shift_nonneg = g.shift_nonneg;
        load.standardize = g.standardize;
        const MultiViewDataset ds = load_dataset(g.manifest, load);
        const MultiViewDataset masked = inject_missingness(ds, g.spec);
        const std::string manifest = save_dataset(masked, g.out);
        std::cout << json{{"manifest", manifest}}.dump() << std::endl;
        return 0;
      };
    });
  }

  // fit
  auto* fitc = app.add_subcommand("fit", "Fit the factor model on a dataset");
  {
    static FitFlags g;
    add_fit_flags(fitc, g);
    fitc->callback([&] {
      action = [] {
        const FitOutcome res = fit_from_flags(g);
        write_model(res.model, res.trace, g.out);
        std::cout << fit_summary(res.trace, g.out).dump() << std::endl;
        return 0;
      };
    });
  }

  // rank
  auto* rankc = app.add_subcommand("rank", "Fit, rank features, export the ordering");
  {
    struct RankFlags {
      FitFlags fit;
      double fraction = 0.1;
      bool per_view_quota = false;
      bool emit_selected = false;
    } static g;
    add_fit_flags(rankc, g.fit);
    rankc->add_option("--fraction", g.fraction, "Selected feature fraction");
    rankc->add_flag("--per-view-quota", g.per_view_quota, "Per-view selection quotas");
    rankc->add_flag("--emit-selected", g.emit_selected,
                    "Also write the reduced dataset under <out>/selected");
    rankc->callback([&] {
      action = [] {
        const FitOutcome res = fit_from_flags(g.fit);
        write_model(res.model, res.trace, g.fit.out);
        const FeatureRanking ranking = rank_features(res.model);
        write_ranking_csv(ranking, (fs::path(g.fit.out) / "ranking.csv").string());
        SelectOptions opts;
        opts.per_view_quota = g.per_view_quota;
        const auto chosen = select_entries(ranking, g.fraction, opts);
        json summary = fit_summary(res.trace, g.fit.out);
        summary["selected"] = chosen.size();
        summary["total"] = ranking.scores.size();
        if (g.emit_selected) {
          const MultiViewDataset reduced =
              select_subset(res.data, ranking, g.fraction, opts);
          summary["selected_manifest"] =
              save_dataset(reduced, (fs::path(g.fit.out) / "selected").string());
        }
        std::cout << summary.dump() << std::endl;
        return 0;
      };
    });
  }

  // evaluate
  auto* evalc = app.add_subcommand(
      "evaluate", "Split, fit on the training part, select, classify, score");
  {
    struct EvalFlags {
      FitFlags fit;
      double fraction = 0.1;
      double train_fraction = 0.7;
      int knn_neighbors = 10;
      double knn_smoothing = 1.0;
      bool per_view_quota = false;
    } static g;
    add_fit_flags(evalc, g.fit);
    evalc->add_option("--fraction", g.fraction, "Selected feature fraction");
    evalc->add_option("--train-fraction", g.train_fraction, "Training split fraction");
    evalc->add_option("--knn-neighbors", g.knn_neighbors, "ML-KNN neighbor count");
    evalc->add_option("--knn-smoothing", g.knn_smoothing, "ML-KNN smoothing");
    evalc->add_flag("--per-view-quota", g.per_view_quota, "Per-view selection quotas");
    evalc->callback([&] {
      action = [] {
        LoadOptions load;
        load.shift_nonneg = g.fit.shift_nonneg;
        load.standardize = g.fit.standardize;
        const MultiViewDataset ds = load_dataset(g.fit.manifest, load);
        const SplitResult split =
            split_subjects(ds, g.train_fraction, mix_seed(g.fit.seed, 3));
        Hyperparams h;
        h.lambda = g.fit.lambda;
        h.eta = g.fit.eta;
        h.delta = g.fit.delta;
        h.gamma = g.fit.gamma;
        h.max_iters = g.fit.max_iters;
        h.rel_tol = g.fit.rel_tol;
        const LabelGraph graph =
            h.eta > 0.0 ? build_label_graph(split.train.labels,
                                            g.fit.graph_neighbors, g.fit.graph_sigma)
                        : LabelGraph::empty(split.train.n());
        const auto [model, trace] =
            fit(split.train, graph, h, mix_seed(g.fit.seed, 4));
        const FeatureRanking ranking = rank_features(model);
        SelectOptions opts;
        opts.per_view_quota = g.per_view_quota;
        const MultiViewDataset train_sel =
            select_subset(split.train, ranking, g.fraction, opts);
        const MultiViewDataset test_sel =
            select_subset(split.test, ranking, g.fraction, opts);
        const MlknnModel knn =
            train_mlknn(concat_features(train_sel), train_sel.labels,
                        g.knn_neighbors, g.knn_smoothing);
        const MlknnPrediction pred = predict_mlknn(knn, concat_features(test_sel));
        const MetricReport metrics =
            evaluate_all(pred.predictions, pred.confidences, test_sel.labels.values);
        json out{{"metrics", metrics_to_json(metrics)},
                 {"iterations", trace.iterations_run},
                 {"converged", trace.converged},
                 {"train_instances", split.train.n()},
                 {"test_instances", split.test.n()}};
        fs::create_directories(g.fit.out);
        std::ofstream mf(fs::path(g.fit.out) / "metrics.json");
        mf << out.dump(2) << '\n';
        std::cout << out.dump() << std::endl;
        return 0;
      };
    });
  }

  // run
  auto* runc = app.add_subcommand("run", "Run a configured experiment and emit reports");
  {
    static RunFlags g;
    add_run_flags(runc, g);
    runc->callback([&] {
      action = [runc] {
        const ExperimentConfig cfg = config_from_run_flags(runc, g);
        const ExperimentReport report = run_experiment(cfg);
        emit_reports(report, g.out);
        int failed = 0;
        for (const CellResult& c : report.cells) failed += c.failed ? 1 : 0;
        std::ofstream cf(fs::path(g.out) / "config.json");
        cf << config_to_json(cfg);
        std::cout << json{{"cells", report.cells.size()},
                          {"failed", failed},
                          {"out", g.out}}
                         .dump()
                  << std::endl;
        return failed == static_cast<int>(report.cells.size()) && !report.cells.empty()
                   ? 1
                   : 0;
      };
    });
  }

  // sweep
  auto* sweepc =
      app.add_subcommand("sweep", "Pairwise hyperparameter sensitivity surfaces");
  {
    static RunFlags g;
    add_run_flags(sweepc, g);
    sweepc->callback([&] {
      action = [sweepc] {
        ExperimentConfig cfg = config_from_run_flags(sweepc, g);
        const auto pinned = config_file_grid_keys(g.config_path);
        const auto is_pinned = [&](const char* name) {
          return sweepc->count(std::string("--") + name) > 0 ||
                 std::find(pinned.begin(), pinned.end(), name) != pinned.end();
        };
        if (!is_pinned("lambda")) cfg.grid.lambda = default_weight_grid();
        if (!is_pinned("eta")) cfg.grid.eta = default_weight_grid();
        if (!is_pinned("delta")) cfg.grid.delta = default_weight_grid();
        const auto surfaces = sweep_sensitivity(cfg);
        write_sensitivity_csv(surfaces, g.out);
        json files = json::array();
        for (const auto& s : surfaces) {
          files.push_back("sensitivity_" + s.param_a + "_" + s.param_b + ".csv");
        }
        std::cout << json{{"out", g.out}, {"files", files}}.dump() << std::endl;
        return 0;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what());
    return e.get_exit_code() != 0 ? e.get_exit_code() : 1;
  }

  try {
    return action();
  } catch (const std::invalid_argument& e) {
    emit_error("invalid_argument", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("runtime_error", e.what());
    return 1;
  }
}
