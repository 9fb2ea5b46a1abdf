#include "aslsl/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "aslsl/matrix_io.hpp"
#include "aslsl/mlknn.hpp"
#include "aslsl/rng.hpp"

namespace aslsl {

namespace {

using nlohmann::json;

constexpr std::uint64_t kStageData = 1;
constexpr std::uint64_t kStageMissing = 2;
constexpr std::uint64_t kStageSplit = 3;
constexpr std::uint64_t kStageFit = 4;

constexpr std::array<const char*, 7> kMetricNames = {
    "hamming_loss",      "ranking_loss", "coverage", "coverage_normalized",
    "average_precision", "macro_f1",     "micro_f1"};

double metric_value(const MetricReport& r, std::size_t idx) {
  switch (idx) {
    case 0: return r.hamming_loss;
    case 1: return r.ranking_loss;
    case 2: return r.coverage;
    case 3: return r.coverage_normalized;
    case 4: return r.average_precision;
    case 5: return r.macro_f1;
    default: return idx == 6 ? r.micro_f1 : 0.0;
  }
}

void set_metric(MetricReport& r, std::size_t idx, double v) {
  switch (idx) {
    case 0: r.hamming_loss = v; break;
    case 1: r.ranking_loss = v; break;
    case 2: r.coverage = v; break;
    case 3: r.coverage_normalized = v; break;
    case 4: r.average_precision = v; break;
    case 5: r.macro_f1 = v; break;
    case 6: r.micro_f1 = v; break;
    default: break;
  }
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        })) {
      throw std::invalid_argument("unknown config key \"" + item.key() +
                                  "\" in " + where);
    }
  }
}

std::string short_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string combo_tag(const CellKey& k) {
  return "r" + short_num(k.ratio) + "_l" + short_num(k.lambda) + "_e" +
         short_num(k.eta) + "_d" + short_num(k.delta) + "_g" +
         short_num(k.gamma);
}

std::string iso_utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// Independent per-view fits standing in for the shared-latent model: every
// view keeps its own latent matrix, projections are pooled for ranking and
// the combined trace sums the per-view objectives (shorter fits padded with
// their final value).
void fit_independent_views(const MultiViewDataset& train, const LabelGraph& graph,
                           const Hyperparams& h, std::uint64_t seed,
                           const FitOptions& fopts, AslslModel& model,
                           ConvergenceTrace& trace) {
  const Eigen::Index m = train.m();
  model = AslslModel{};
  model.hyper = h;
  std::vector<ConvergenceTrace> subs;
  subs.reserve(m);
  for (Eigen::Index v = 0; v < m; ++v) {
    MultiViewDataset single;
    single.name = train.name;
    single.views.push_back(train.views[v]);
    single.labels = train.labels;
    auto [mv, tv] = fit(single, graph, h, mix_seed(seed, v), fopts);
    model.projections.push_back(std::move(mv.projections[0]));
    if (v == 0) {
      model.latent = std::move(mv.latent);
      model.label_coef = std::move(mv.label_coef);
    }
    subs.push_back(std::move(tv));
  }
  model.view_weights = Vector::Constant(m, 1.0 / static_cast<double>(m));

  trace = ConvergenceTrace{};
  for (const ConvergenceTrace& s : subs) {
    trace.iterations_run = std::max(trace.iterations_run, s.iterations_run);
    trace.zero_cost_events += s.zero_cost_events;
  }
  trace.converged = std::all_of(subs.begin(), subs.end(),
                                [](const ConvergenceTrace& s) { return s.converged; });
  trace.objective_values.assign(trace.iterations_run + 1, 0.0);
  for (int t = 0; t <= trace.iterations_run; ++t) {
    for (const ConvergenceTrace& s : subs) {
      trace.objective_values[t] += s.objective_values[std::min(t, s.iterations_run)];
    }
  }
  for (int t = 1; t <= trace.iterations_run; ++t) {
    std::vector<double> row(m);
    for (Eigen::Index v = 0; v < m; ++v) {
      const auto& rows = subs[v].per_view_residuals;
      row[v] = rows[std::min<std::size_t>(t - 1, rows.size() - 1)][0];
    }
    trace.per_view_residuals.push_back(std::move(row));
    trace.weight_history.push_back(model.view_weights);
  }
}

CellResult run_one_cell(const ExperimentConfig& cfg, const MultiViewDataset* base,
                        const CellKey& key, std::size_t ratio_index) {
  CellResult cell;
  cell.key = key;
  const auto t_start = std::chrono::steady_clock::now();
  try {
    const std::uint64_t trial_seed =
        cfg.base_seed + static_cast<std::uint64_t>(key.trial);
    MultiViewDataset data;
    if (base != nullptr) {
      data = *base;
    } else {
      SyntheticSpec spec = cfg.synthetic;
      spec.seed = mix_seed(trial_seed, kStageData);
      data = generate_synthetic(spec).dataset;
    }
    if (key.ratio > 0.0) {
      MissingnessSpec miss;
      miss.ratio = key.ratio;
      miss.seed = mix_seed(mix_seed(trial_seed, kStageMissing), ratio_index);
      data = inject_missingness(data, miss);
    }
    const SplitResult split =
        split_subjects(data, cfg.train_fraction, mix_seed(trial_seed, kStageSplit));

    Hyperparams h;
    h.lambda = key.lambda;
    h.eta = cfg.ablation.disable_graph ? 0.0 : key.eta;
    h.delta = key.delta;
    h.gamma = key.gamma;
    h.max_iters = cfg.max_iters;
    h.rel_tol = cfg.rel_tol;
    FitOptions fopts;
    fopts.adaptive_weights = !cfg.ablation.disable_adaptive_weights;

    const LabelGraph graph =
        h.eta > 0.0
            ? build_label_graph(split.train.labels, cfg.graph_neighbors,
                                cfg.graph_sigma)
            : LabelGraph::empty(split.train.n());

    const std::uint64_t fit_seed = mix_seed(trial_seed, kStageFit);
    const auto t_fit = std::chrono::steady_clock::now();
    AslslModel model;
    ConvergenceTrace trace;
    if (cfg.ablation.disable_shared_latent) {
      fit_independent_views(split.train, graph, h, fit_seed, fopts, model, trace);
    } else {
      std::tie(model, trace) = fit(split.train, graph, h, fit_seed, fopts);
    }
    cell.fit_seconds = seconds_since(t_fit);
    cell.alpha = model.view_weights;
    cell.iterations_run = trace.iterations_run;
    cell.converged = trace.converged;
    cell.objective_final = trace.objective_values.back();

    FeatureRanking ranking = rank_features(model);
    SelectOptions sopts;
    sopts.per_view_quota = cfg.per_view_quota;
    const MultiViewDataset train_sel =
        select_subset(split.train, ranking, cfg.selection_fraction, sopts);
    const MultiViewDataset test_sel =
        select_subset(split.test, ranking, cfg.selection_fraction, sopts);

    const MlknnModel knn =
        train_mlknn(concat_features(train_sel), train_sel.labels,
                    cfg.knn_neighbors, cfg.knn_smoothing);
    const MlknnPrediction pred = predict_mlknn(knn, concat_features(test_sel));
    cell.metrics =
        evaluate_all(pred.predictions, pred.confidences, test_sel.labels.values);
    if (key.trial == 0) {
      cell.trace = std::move(trace);
      cell.ranking = std::move(ranking);
    }
  } catch (const std::exception& e) {
    cell.failed = true;
    cell.error = e.what();
  }
  cell.total_seconds = seconds_since(t_start);
  return cell;
}

json key_to_json(const CellKey& key, bool with_trial) {
  json j{{"ratio", key.ratio},
         {"lambda", key.lambda},
         {"eta", key.eta},
         {"delta", key.delta},
         {"gamma", key.gamma}};
  if (with_trial) j["trial"] = key.trial;
  return j;
}

std::vector<double>& grid_slot(HyperGrid& grid, const std::string& name) {
  if (name == "lambda") return grid.lambda;
  if (name == "eta") return grid.eta;
  if (name == "delta") return grid.delta;
  if (name == "gamma") return grid.gamma;
  throw std::invalid_argument("unknown grid parameter: " + name);
}

}  // namespace

std::vector<double> default_weight_grid() {
  return {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
}

std::vector<double> default_gamma_set() {
  return {2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0};
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (missing_ratios.empty()) {
    throw std::invalid_argument("missing_ratios must be non-empty");
  }
  for (double r : missing_ratios) {
    if (r < 0.0 || r > 0.5) {
      throw std::invalid_argument("missing ratios must lie in [0, 0.5]");
    }
  }
  if (grid.lambda.empty() || grid.eta.empty() || grid.delta.empty() ||
      grid.gamma.empty()) {
    throw std::invalid_argument("hyperparameter grids must be non-empty");
  }
  if (!(selection_fraction > 0.0) || selection_fraction > 1.0) {
    throw std::invalid_argument("selection_fraction must lie in (0, 1]");
  }
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must lie in (0, 1)");
  }
  if (graph_neighbors < 1) throw std::invalid_argument("graph neighbors must be >= 1");
  if (!(graph_sigma > 0.0)) throw std::invalid_argument("graph sigma must be > 0");
  if (knn_neighbors < 1) throw std::invalid_argument("mlknn neighbors must be >= 1");
  if (knn_smoothing < 0.0) throw std::invalid_argument("mlknn smoothing must be >= 0");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be > 0");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root = json::parse(json_text);
  if (!root.is_object()) throw std::invalid_argument("config must be a JSON object");
  check_keys(root, "config",
             {"data", "missing_ratios", "grid", "selection_fraction",
              "per_view_quota", "train_fraction", "trials", "base_seed",
              "ablation", "graph", "mlknn", "optimizer"});
  ExperimentConfig c;
  if (root.contains("data")) {
    const json& d = root["data"];
    check_keys(d, "data", {"manifest", "synthetic", "shift_nonneg", "standardize"});
    if (d.contains("manifest") && d.contains("synthetic")) {
      throw std::invalid_argument("config data: give either manifest or synthetic");
    }
    if (d.contains("manifest")) c.manifest_path = d["manifest"].get<std::string>();
    if (d.contains("shift_nonneg")) c.load.shift_nonneg = d["shift_nonneg"].get<bool>();
    if (d.contains("standardize")) c.load.standardize = d["standardize"].get<bool>();
    if (d.contains("synthetic")) {
      const json& s = d["synthetic"];
      check_keys(s, "data.synthetic",
                 {"n", "m", "k", "dims", "informative_per_view", "noise_level"});
      if (s.contains("n")) c.synthetic.n = s["n"].get<Eigen::Index>();
      if (s.contains("m")) c.synthetic.m = s["m"].get<Eigen::Index>();
      if (s.contains("k")) c.synthetic.k = s["k"].get<Eigen::Index>();
      if (s.contains("dims")) {
        c.synthetic.dims.clear();
        for (const json& v : s["dims"]) {
          c.synthetic.dims.push_back(v.get<Eigen::Index>());
        }
      }
      if (s.contains("informative_per_view")) {
        c.synthetic.informative_per_view = s["informative_per_view"].get<Eigen::Index>();
      }
      if (s.contains("noise_level")) {
        c.synthetic.noise_level = s["noise_level"].get<double>();
      }
    }
  }
  if (root.contains("missing_ratios")) {
    c.missing_ratios.clear();
    for (const json& v : root["missing_ratios"]) {
      c.missing_ratios.push_back(v.get<double>());
    }
  }
  if (root.contains("grid")) {
    const json& g = root["grid"];
    check_keys(g, "grid", {"lambda", "eta", "delta", "gamma"});
    for (const char* name : {"lambda", "eta", "delta", "gamma"}) {
      if (!g.contains(name)) continue;
      std::vector<double>& slot = grid_slot(c.grid, name);
      slot.clear();
      for (const json& v : g[name]) slot.push_back(v.get<double>());
    }
  }
  if (root.contains("selection_fraction")) {
    c.selection_fraction = root["selection_fraction"].get<double>();
  }
  if (root.contains("per_view_quota")) {
    c.per_view_quota = root["per_view_quota"].get<bool>();
  }
  if (root.contains("train_fraction")) {
    c.train_fraction = root["train_fraction"].get<double>();
  }
  if (root.contains("trials")) c.trials = root["trials"].get<int>();
  if (root.contains("base_seed")) c.base_seed = root["base_seed"].get<std::uint64_t>();
  if (root.contains("ablation")) {
    const json& a = root["ablation"];
    check_keys(a, "ablation",
               {"disable_shared_latent", "disable_graph", "disable_adaptive_weights"});
    if (a.contains("disable_shared_latent")) {
      c.ablation.disable_shared_latent = a["disable_shared_latent"].get<bool>();
    }
    if (a.contains("disable_graph")) {
      c.ablation.disable_graph = a["disable_graph"].get<bool>();
    }
    if (a.contains("disable_adaptive_weights")) {
      c.ablation.disable_adaptive_weights = a["disable_adaptive_weights"].get<bool>();
    }
  }
  if (root.contains("graph")) {
    const json& g = root["graph"];
    check_keys(g, "graph", {"neighbors", "sigma"});
    if (g.contains("neighbors")) c.graph_neighbors = g["neighbors"].get<int>();
    if (g.contains("sigma")) c.graph_sigma = g["sigma"].get<double>();
  }
  if (root.contains("mlknn")) {
    const json& g = root["mlknn"];
    check_keys(g, "mlknn", {"neighbors", "smoothing"});
    if (g.contains("neighbors")) c.knn_neighbors = g["neighbors"].get<int>();
    if (g.contains("smoothing")) c.knn_smoothing = g["smoothing"].get<double>();
  }
  if (root.contains("optimizer")) {
    const json& g = root["optimizer"];
    check_keys(g, "optimizer", {"max_iters", "rel_tol"});
    if (g.contains("max_iters")) c.max_iters = g["max_iters"].get<int>();
    if (g.contains("rel_tol")) c.rel_tol = g["rel_tol"].get<double>();
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  try {
    return parse_config(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config " + path + ": " + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& c) {
  json data;
  if (!c.manifest_path.empty()) {
    data["manifest"] = c.manifest_path;
  } else {
    data["synthetic"] = {{"n", c.synthetic.n},
                         {"m", c.synthetic.m},
                         {"k", c.synthetic.k},
                         {"dims", c.synthetic.dims},
                         {"informative_per_view", c.synthetic.informative_per_view},
                         {"noise_level", c.synthetic.noise_level}};
  }
  data["shift_nonneg"] = c.load.shift_nonneg;
  data["standardize"] = c.load.standardize;
  json root{
      {"data", data},
      {"missing_ratios", c.missing_ratios},
      {"grid",
       {{"lambda", c.grid.lambda},
        {"eta", c.grid.eta},
        {"delta", c.grid.delta},
        {"gamma", c.grid.gamma}}},
      {"selection_fraction", c.selection_fraction},
      {"per_view_quota", c.per_view_quota},
      {"train_fraction", c.train_fraction},
      {"trials", c.trials},
      {"base_seed", c.base_seed},
      {"ablation",
       {{"disable_shared_latent", c.ablation.disable_shared_latent},
        {"disable_graph", c.ablation.disable_graph},
        {"disable_adaptive_weights", c.ablation.disable_adaptive_weights}}},
      {"graph", {{"neighbors", c.graph_neighbors}, {"sigma", c.graph_sigma}}},
      {"mlknn", {{"neighbors", c.knn_neighbors}, {"smoothing", c.knn_smoothing}}},
      {"optimizer", {{"max_iters", c.max_iters}, {"rel_tol", c.rel_tol}}}};
  return root.dump(2) + "\n";
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;

  MultiViewDataset base;
  const bool from_manifest = !config.manifest_path.empty();
  if (from_manifest) base = load_dataset(config.manifest_path, config.load);

  for (std::size_t ri = 0; ri < config.missing_ratios.size(); ++ri) {
    for (double lambda : config.grid.lambda) {
      for (double eta : config.grid.eta) {
        for (double delta : config.grid.delta) {
          for (double gamma : config.grid.gamma) {
            for (int trial = 0; trial < config.trials; ++trial) {
              CellKey key;
              key.ratio = config.missing_ratios[ri];
              key.lambda = lambda;
              key.eta = eta;
              key.delta = delta;
              key.gamma = gamma;
              key.trial = trial;
              report.cells.push_back(
                  run_one_cell(config, from_manifest ? &base : nullptr, key, ri));
            }
          }
        }
      }
    }
  }
  return report;
}

std::vector<AggregateRow> aggregate_cells(const std::vector<CellResult>& cells) {
  std::vector<AggregateRow> rows;
  std::vector<std::vector<MetricReport>> samples;
  std::map<std::array<double, 5>, std::size_t> index;
  for (const CellResult& c : cells) {
    const std::array<double, 5> k{c.key.ratio, c.key.lambda, c.key.eta,
                                  c.key.delta, c.key.gamma};
    auto [it, inserted] = index.try_emplace(k, rows.size());
    if (inserted) {
      rows.emplace_back();
      rows.back().key = c.key;
      rows.back().key.trial = 0;
      samples.emplace_back();
    }
    AggregateRow& row = rows[it->second];
    if (c.failed) {
      ++row.failed;
    } else {
      ++row.completed;
      samples[it->second].push_back(c.metrics);
    }
  }
  for (std::size_t g = 0; g < rows.size(); ++g) {
    const std::vector<MetricReport>& s = samples[g];
    if (s.empty()) continue;
    for (std::size_t idx = 0; idx < kMetricNames.size(); ++idx) {
      double sum = 0.0;
      for (const MetricReport& r : s) sum += metric_value(r, idx);
      const double mean = sum / static_cast<double>(s.size());
      set_metric(rows[g].mean, idx, mean);
      double sq = 0.0;
      for (const MetricReport& r : s) {
        const double d = metric_value(r, idx) - mean;
        sq += d * d;
      }
      const double sd =
          s.size() > 1 ? std::sqrt(sq / static_cast<double>(s.size() - 1)) : 0.0;
      set_metric(rows[g].stddev, idx, sd);
    }
  }
  return rows;
}

void emit_reports(const ExperimentReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(out_dir) / "convergence");
  fs::create_directories(fs::path(out_dir) / "ranking");

  {
    std::ofstream mf(fs::path(out_dir) / "metrics.csv");
    if (!mf) throw std::runtime_error("cannot open metrics.csv for writing");
    mf << "ratio,lambda,eta,delta,gamma,trial,metric,value\n";
    for (const CellResult& c : report.cells) {
      if (c.failed) continue;
      const std::string prefix = format_double(c.key.ratio) + "," +
                                 format_double(c.key.lambda) + "," +
                                 format_double(c.key.eta) + "," +
                                 format_double(c.key.delta) + "," +
                                 format_double(c.key.gamma) + "," +
                                 std::to_string(c.key.trial) + ",";
      for (std::size_t idx = 0; idx < kMetricNames.size(); ++idx) {
        mf << prefix << kMetricNames[idx] << ','
           << format_double(metric_value(c.metrics, idx)) << '\n';
      }
      mf << prefix << "iterations," << c.iterations_run << '\n';
      mf << prefix << "converged," << (c.converged ? 1 : 0) << '\n';
      mf << prefix << "objective," << format_double(c.objective_final) << '\n';
    }
  }

  {
    std::ofstream af(fs::path(out_dir) / "alpha.csv");
    if (!af) throw std::runtime_error("cannot open alpha.csv for writing");
    af << "ratio,lambda,eta,delta,gamma,trial,view,weight\n";
    for (const CellResult& c : report.cells) {
      if (c.failed) continue;
      for (Eigen::Index v = 0; v < c.alpha.size(); ++v) {
        af << format_double(c.key.ratio) << ',' << format_double(c.key.lambda)
           << ',' << format_double(c.key.eta) << ','
           << format_double(c.key.delta) << ',' << format_double(c.key.gamma)
           << ',' << c.key.trial << ',' << v << ','
           << format_double(c.alpha(v)) << '\n';
      }
    }
  }

  {
    json groups = json::array();
    for (const AggregateRow& row : aggregate_cells(report.cells)) {
      json g = key_to_json(row.key, false);
      g["completed"] = row.completed;
      g["failed"] = row.failed;
      json mean, stddev;
      for (std::size_t idx = 0; idx < kMetricNames.size(); ++idx) {
        mean[kMetricNames[idx]] = metric_value(row.mean, idx);
        stddev[kMetricNames[idx]] = metric_value(row.stddev, idx);
      }
      g["mean"] = mean;
      g["stddev"] = stddev;
      groups.push_back(g);
    }
    std::ofstream jf(fs::path(out_dir) / "aggregate.json");
    if (!jf) throw std::runtime_error("cannot open aggregate.json for writing");
    jf << json{{"groups", groups}}.dump(2) << '\n';
  }

  {
    json errors = json::array();
    for (const CellResult& c : report.cells) {
      if (!c.failed) continue;
      json e = key_to_json(c.key, true);
      e["message"] = c.error;
      errors.push_back(e);
    }
    std::ofstream ef(fs::path(out_dir) / "errors.json");
    if (!ef) throw std::runtime_error("cannot open errors.json for writing");
    ef << json{{"errors", errors}}.dump(2) << '\n';
  }

  std::set<std::string> used_tags;
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const CellResult& c = report.cells[i];
    const bool has_trace = !c.trace.objective_values.empty();
    const bool has_ranking = !c.ranking.scores.empty();
    if (!has_trace && !has_ranking) continue;
    std::string tag = combo_tag(c.key);
    if (!used_tags.insert(tag).second) {
      tag += "_x" + std::to_string(i);
      used_tags.insert(tag);
    }
    if (has_trace) {
      write_convergence_csv(c.trace,
                            (fs::path(out_dir) / "convergence" / (tag + ".csv")).string());
    }
    if (has_ranking) {
      write_ranking_csv(c.ranking,
                        (fs::path(out_dir) / "ranking" / (tag + ".csv")).string());
    }
  }

  {
    json cells = json::array();
    double total = 0.0;
    for (const CellResult& c : report.cells) {
      json e = key_to_json(c.key, true);
      e["fit_seconds"] = c.fit_seconds;
      e["total_seconds"] = c.total_seconds;
      cells.push_back(e);
      total += c.total_seconds;
    }
    std::ofstream mf(fs::path(out_dir) / "meta.json");
    if (!mf) throw std::runtime_error("cannot open meta.json for writing");
    mf << json{{"generated_at", iso_utc_now()},
               {"total_seconds", total},
               {"cells", cells}}
              .dump(2)
       << '\n';
  }
}

std::vector<SensitivitySurface> sweep_sensitivity(const ExperimentConfig& config) {
  config.validate();
  const double fixed_weight = 0.1;
  const double fixed_gamma = 2.0;
  const std::array<std::pair<const char*, const char*>, 3> pairs = {
      {{"lambda", "eta"}, {"lambda", "delta"}, {"eta", "delta"}}};

  std::vector<SensitivitySurface> out;
  for (const auto& [pa, pb] : pairs) {
    SensitivitySurface surf;
    surf.param_a = pa;
    surf.param_b = pb;
    HyperGrid source = config.grid;
    const std::vector<double> grid_a = grid_slot(source, pa);
    const std::vector<double> grid_b = grid_slot(source, pb);
    for (double a : grid_a) {
      for (double b : grid_b) {
        ExperimentConfig sub = config;
        sub.missing_ratios = {config.missing_ratios.front()};
        sub.grid.lambda = {fixed_weight};
        sub.grid.eta = {fixed_weight};
        sub.grid.delta = {fixed_weight};
        sub.grid.gamma = {fixed_gamma};
        grid_slot(sub.grid, pa) = {a};
        grid_slot(sub.grid, pb) = {b};
        const ExperimentReport rep = run_experiment(sub);
        double sum = 0.0;
        int done = 0;
        for (const CellResult& c : rep.cells) {
          if (c.failed) continue;
          sum += c.metrics.average_precision;
          ++done;
        }
        surf.rows.push_back({sub.grid.lambda[0], sub.grid.eta[0],
                             sub.grid.delta[0], fixed_gamma,
                             done > 0 ? sum / done : 0.0});
      }
    }
    out.push_back(std::move(surf));
  }
  return out;
}

void write_sensitivity_csv(const std::vector<SensitivitySurface>& surfaces,
                           const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  for (const SensitivitySurface& surf : surfaces) {
    const fs::path path =
        fs::path(out_dir) /
        ("sensitivity_" + surf.param_a + "_" + surf.param_b + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "lambda,eta,delta,gamma,average_precision\n";
    for (const auto& row : surf.rows) {
      out << format_double(row[0]) << ',' << format_double(row[1]) << ','
          << format_double(row[2]) << ',' << format_double(row[3]) << ','
          << format_double(row[4]) << '\n';
    }
  }
}

}  // namespace aslsl
