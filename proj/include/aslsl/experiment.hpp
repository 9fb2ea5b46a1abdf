#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "aslsl/dataset.hpp"
#include "aslsl/feature_ranking.hpp"
#include "aslsl/metrics.hpp"
#include "aslsl/optimizer.hpp"
#include "aslsl/simulation.hpp"
#include "aslsl/types.hpp"

namespace aslsl {

struct AblationFlags {
  bool disable_shared_latent = false;   // independent per-view fits, pooled ranking
  bool disable_graph = false;           // label-graph weight forced to 0
  bool disable_adaptive_weights = false;  // view weights pinned uniform
};

struct HyperGrid {
  std::vector<double> lambda{1.0};
  std::vector<double> eta{1.0};
  std::vector<double> delta{1.0};
  std::vector<double> gamma{2.0};
};

// Logarithmic weight grid 1e-3 .. 1e3 (factor 10) and the exponent set 2..9.
std::vector<double> default_weight_grid();
std::vector<double> default_gamma_set();

struct ExperimentConfig {
  std::string manifest_path;  // empty -> synthetic source
  SyntheticSpec synthetic;
  LoadOptions load;

  std::vector<double> missing_ratios{0.0};
  HyperGrid grid;
  double selection_fraction = 0.1;
  bool per_view_quota = false;
  double train_fraction = 0.7;
  int trials = 50;
  std::uint64_t base_seed = 0;
  AblationFlags ablation;

  int graph_neighbors = 5;
  double graph_sigma = 1.0;
  int knn_neighbors = 10;
  double knn_smoothing = 1.0;
  int max_iters = 500;
  double rel_tol = 1e-6;

  void validate() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

struct CellKey {
  double ratio = 0.0;
  double lambda = 1.0, eta = 1.0, delta = 1.0, gamma = 2.0;
  int trial = 0;
};

struct CellResult {
  CellKey key;
  bool failed = false;
  std::string error;
  MetricReport metrics;
  Vector alpha;              // final view weights
  int iterations_run = 0;
  bool converged = false;
  double objective_final = 0.0;
  ConvergenceTrace trace;    // retained for trial 0 only
  FeatureRanking ranking;    // retained for trial 0 only
  double fit_seconds = 0.0;
  double total_seconds = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<CellResult> cells;  // ratio-major, combo, then trial order
};

// Every (ratio x hyper-combo x trial) cell; trial seed = base_seed + trial.
// A failing cell is recorded with its error and never aborts the sweep.
ExperimentReport run_experiment(const ExperimentConfig& config);

struct AggregateRow {
  CellKey key;  // trial field unused
  int completed = 0;
  int failed = 0;
  MetricReport mean;
  MetricReport stddev;  // sample standard deviation, 0 for a single trial
};

std::vector<AggregateRow> aggregate_cells(const std::vector<CellResult>& cells);

// Writes metrics.csv, aggregate.json, alpha.csv, errors.json,
// convergence/*.csv and ranking/*.csv (trial 0 of each combo), plus a
// meta.json sidecar. Everything except meta.json is byte-deterministic for a
// fixed config; wall-clock readings live only in the sidecar.
void emit_reports(const ExperimentReport& report, const std::string& out_dir);

struct SensitivitySurface {
  std::string param_a, param_b;
  std::vector<std::array<double, 5>> rows;  // lambda,eta,delta,gamma,mean AP
};

// Pairwise surfaces over the weight parameters: the two named parameters vary
// over their grids, the remaining weight stays at 0.1 with exponent 2.
std::vector<SensitivitySurface> sweep_sensitivity(const ExperimentConfig& config);

void write_sensitivity_csv(const std::vector<SensitivitySurface>& surfaces,
                           const std::string& out_dir);

}  // namespace aslsl
