// Acceptance gate. Each criterion exercises the pipeline end to end and
// prints a single "criterion N: PASS/FAIL" line with its measured margin.
// The criterion number is the sole command-line argument; the process exit
// code is 0 only when the criterion holds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aslsl/dataset.hpp"
#include "aslsl/experiment.hpp"
#include "aslsl/feature_ranking.hpp"
#include "aslsl/label_graph.hpp"
#include "aslsl/metrics.hpp"
#include "aslsl/mlknn.hpp"
#include "aslsl/optimizer.hpp"
#include "aslsl/simulation.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace aslsl;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// The desk-scale synthetic family: 3 views of 50 features (5 informative),
// 300 instances, 3 labels, mild noise.
SyntheticSpec family_spec(std::uint64_t seed) {
  SyntheticSpec s;
  s.n = 300;
  s.m = 3;
  s.k = 3;
  s.dims = {50, 50, 50};
  s.informative_per_view = 5;
  s.noise_level = 0.1;
  s.seed = seed;
  return s;
}

AslslModel zero_factor_model(const MultiViewDataset& ds, const Hyperparams& h) {
  AslslModel m;
  m.hyper = h;
  for (const auto& view : ds.views) {
    m.projections.push_back(Matrix::Zero(view.dim(), ds.k()));
  }
  m.latent = Matrix::Zero(ds.n(), ds.k());
  m.label_coef = Matrix::Zero(ds.k(), ds.k());
  m.view_weights = Vector::Constant(ds.m(), 1.0 / static_cast<double>(ds.m()));
  return m;
}

// m single-entry views whose only instance is present and whose labels are
// zero, so each view's cost reduces to the squared data entry.
MultiViewDataset cost_probe_dataset(const Vector& costs) {
  MultiViewDataset ds;
  ds.name = "cost-probe";
  for (Eigen::Index v = 0; v < costs.size(); ++v) {
    ViewBlock b;
    b.view_id = static_cast<int>(v);
    b.features = Matrix::Constant(1, 1, std::sqrt(costs(v)));
    b.presence = {1};
    ds.views.push_back(std::move(b));
  }
  ds.labels.values = Matrix::Zero(1, 1);
  return ds;
}

bool models_identical(const AslslModel& a, const AslslModel& b) {
  if (a.projections.size() != b.projections.size()) return false;
  for (std::size_t v = 0; v < a.projections.size(); ++v) {
    if (!(a.projections[v] == b.projections[v])) return false;
  }
  return a.latent == b.latent && a.label_coef == b.label_coef &&
         a.view_weights == b.view_weights;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Criterion 1: the objective never increases across sweeps, for random
// hyperparameters drawn from the experiment grids, within 1e-9 relative
// slack, and the whole batch stays under 60 seconds.
bool criterion_monotonicity(std::string& detail) {
  const auto start = Clock::now();
  const auto weights = default_weight_grid();
  const auto gammas = default_gamma_set();
  int increases = 0;
  double worst_rel = 0.0;
  for (int s = 0; s < 100; ++s) {
    SyntheticSpec spec = family_spec(1000 + static_cast<std::uint64_t>(s));
    spec.n = 200;
    auto data = generate_synthetic(spec);
    MultiViewDataset ds = std::move(data.dataset);
    if (s % 2 == 1) {
      MissingnessSpec miss;
      miss.ratio = 0.2;
      miss.seed = 2000 + static_cast<std::uint64_t>(s);
      ds = inject_missingness(ds, miss);
    }
    std::mt19937_64 rng(3000 + static_cast<std::uint64_t>(s));
    std::uniform_int_distribution<std::size_t> wpick(0, weights.size() - 1);
    std::uniform_int_distribution<std::size_t> gpick(0, gammas.size() - 1);
    Hyperparams h;
    h.lambda = weights[wpick(rng)];
    h.eta = weights[wpick(rng)];
    h.delta = weights[wpick(rng)];
    h.gamma = gammas[gpick(rng)];
    const auto graph = build_label_graph(ds.labels, 5, 1.0);
    const auto fitres = fit(ds, graph, h, 4000 + static_cast<std::uint64_t>(s));
    const auto& obj = fitres.second.objective_values;
    for (std::size_t i = 1; i < obj.size(); ++i) {
      const double slack = 1e-9 * std::max(1.0, std::abs(obj[i - 1]));
      if (obj[i] > obj[i - 1] + slack) ++increases;
      if (obj[i] > obj[i - 1]) {
        worst_rel = std::max(worst_rel,
                             (obj[i] - obj[i - 1]) / std::max(1.0, std::abs(obj[i - 1])));
      }
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream ss;
  ss << increases << " increases over 100 fits, worst relative rise "
     << std::scientific << std::setprecision(2) << worst_rel << ", "
     << std::fixed << std::setprecision(1) << elapsed << "s";
  detail = ss.str();
  return increases == 0 && elapsed < 60.0;
}

// Criterion 2: with unit tradeoff weights and exponent 2, the desk-scale fit
// reaches the relative-change tolerance within the sweep cap on at least 19
// of 20 seeds.
bool criterion_convergence(std::string& detail) {
  int converged = 0;
  long total_iters = 0;
  for (int s = 0; s < 20; ++s) {
    auto data = generate_synthetic(family_spec(5000 + static_cast<std::uint64_t>(s)));
    MissingnessSpec miss;
    miss.ratio = 0.3;
    miss.seed = 5100 + static_cast<std::uint64_t>(s);
    const auto ds = inject_missingness(data.dataset, miss);
    const auto graph = build_label_graph(ds.labels, 5, 1.0);
    Hyperparams h;
    const auto fitres = fit(ds, graph, h, 5200 + static_cast<std::uint64_t>(s));
    converged += fitres.second.converged ? 1 : 0;
    total_iters += fitres.second.iterations_run;
  }
  std::ostringstream ss;
  ss << converged << "/20 converged, mean " << total_iters / 20 << " sweeps";
  detail = ss.str();
  return converged >= 19;
}

// Criterion 3: the closed-form view-weight update matches an exhaustive
// simplex grid search (step 0.001) within 1e-3 per coordinate.
bool criterion_weight_oracle(std::string& detail) {
  double worst = 0.0;
  int checks = 0;
  for (Eigen::Index m : {2, 3}) {
    for (int gamma = 2; gamma <= 9; ++gamma) {
      for (int t = 0; t < 100; ++t) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(m) * 100000 +
                            static_cast<std::uint64_t>(gamma) * 1000 +
                            static_cast<std::uint64_t>(t));
        std::uniform_real_distribution<double> logu(std::log(1e-2), std::log(1e2));
        Vector d(m);
        for (Eigen::Index v = 0; v < m; ++v) d(v) = std::exp(logu(rng));
        const auto ds = cost_probe_dataset(d);
        const auto graph = LabelGraph::empty(ds.n());
        Hyperparams h;
        h.gamma = static_cast<double>(gamma);
        AslslModel model = zero_factor_model(ds, h);
        const Vector realized = view_costs(model, ds, graph).cost;
        const Vector grid = oracle::alpha_grid_search(realized, h.gamma, 0.001);
        update_view_weights(model, ds, graph);
        for (Eigen::Index v = 0; v < m; ++v) {
          worst = std::max(worst, std::abs(model.view_weights(v) - grid(v)));
        }
        ++checks;
      }
    }
  }
  std::ostringstream ss;
  ss << checks << " weight vectors, worst coordinate gap " << std::scientific
     << std::setprecision(2) << worst;
  detail = ss.str();
  return worst <= 1e-3;
}

// Criterion 4: with one fully observed view and all extra terms switched
// off, the factor updates coincide with textbook multiplicative NMF for 50
// consecutive steps, elementwise.
bool criterion_nmf_reduction(std::string& detail) {
  double worst = 0.0;
  for (int s = 0; s < 5; ++s) {
    const Eigen::Index n = 30, dim = 20, k = 3;
    std::mt19937_64 rng(77 * static_cast<std::uint64_t>(s) + 13);
    std::uniform_real_distribution<double> unif(0.1, 2.0);
    MultiViewDataset ds;
    ds.name = "nmf";
    ViewBlock b;
    b.view_id = 0;
    b.features = Matrix::NullaryExpr(dim, n, [&]() { return unif(rng); });
    b.presence.assign(static_cast<std::size_t>(n), 1);
    ds.views.push_back(std::move(b));
    ds.labels.values = Matrix::Zero(k, n);

    Hyperparams h;
    h.lambda = 0.0;
    h.eta = 0.0;
    h.delta = 0.0;
    AslslModel model = init_model(ds, k, h, 900 + static_cast<std::uint64_t>(s));
    Matrix w = model.projections[0];
    Matrix u = model.latent;
    const auto graph = LabelGraph::empty(n);
    for (int step = 0; step < 50; ++step) {
      update_projections(model, ds);
      update_latent(model, ds, graph);
      oracle::nmf_step(ds.views[0].features, w, u, h.eps_div);
      worst = std::max(worst, (model.projections[0] - w).cwiseAbs().maxCoeff());
      worst = std::max(worst, (model.latent - u).cwiseAbs().maxCoeff());
    }
  }
  std::ostringstream ss;
  ss << "5 runs of 50 steps, worst elementwise gap " << std::scientific
     << std::setprecision(2) << worst;
  detail = ss.str();
  return worst <= 1e-12;
}

// Criterion 5: arbitrary values in masked-out columns leave the fitted model
// bit-identical, because those columns never enter any update.
bool criterion_mask_correctness(std::string& detail) {
  int identical = 0;
  for (int s = 0; s < 20; ++s) {
    auto data = generate_synthetic(family_spec(7000 + static_cast<std::uint64_t>(s)));
    MissingnessSpec miss;
    miss.ratio = 0.3;
    miss.seed = 7100 + static_cast<std::uint64_t>(s);
    const auto ds = inject_missingness(data.dataset, miss);
    const auto graph = build_label_graph(ds.labels, 5, 1.0);
    Hyperparams h;
    const auto ref = fit(ds, graph, h, 7200 + static_cast<std::uint64_t>(s));

    MultiViewDataset tampered = ds;
    std::mt19937_64 rng(7300 + static_cast<std::uint64_t>(s));
    std::uniform_real_distribution<double> junk(-50.0, 50.0);
    for (auto& view : tampered.views) {
      for (Eigen::Index i = 0; i < view.n(); ++i) {
        if (view.presence[static_cast<std::size_t>(i)]) continue;
        for (Eigen::Index r = 0; r < view.dim(); ++r) view.features(r, i) = junk(rng);
      }
    }
    const auto alt = fit(tampered, graph, h, 7200 + static_cast<std::uint64_t>(s));
    if (models_identical(ref.first, alt.first) &&
        ref.second.objective_values == alt.second.objective_values) {
      ++identical;
    }
  }
  std::ostringstream ss;
  ss << identical << "/20 bit-identical after tampering masked columns";
  detail = ss.str();
  return identical == 20;
}

// Criterion 6: the pooled ranking finds the planted features (precision at
// the planted count averages at least 0.8) and selecting the top tenth beats
// classifying on all features.
bool criterion_planted_recovery(std::string& detail) {
  double precision_sum = 0.0, ap_selected_sum = 0.0, ap_all_sum = 0.0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    auto data = generate_synthetic(family_spec(8000 + static_cast<std::uint64_t>(s)));
    MissingnessSpec miss;
    miss.ratio = 0.3;
    miss.seed = 8100 + static_cast<std::uint64_t>(s);
    const auto ds = inject_missingness(data.dataset, miss);
    const auto split = split_subjects(ds, 0.7, 8200 + static_cast<std::uint64_t>(s));
    const auto graph = build_label_graph(split.train.labels, 5, 1.0);
    Hyperparams h;
    const auto fitres = fit(split.train, graph, h, 8300 + static_cast<std::uint64_t>(s));
    const auto ranking = rank_features(fitres.first);

    int hits = 0;
    const int planted_total = 15;
    for (int r = 0; r < planted_total; ++r) {
      const auto& entry = ranking.scores[ranking.order[static_cast<std::size_t>(r)]];
      const auto& rows = data.informative[static_cast<std::size_t>(entry.view_id)];
      if (std::binary_search(rows.begin(), rows.end(), entry.feature_index)) ++hits;
    }
    precision_sum += static_cast<double>(hits) / static_cast<double>(planted_total);

    const auto train_sel = select_subset(split.train, ranking, 0.1);
    const auto test_sel = select_subset(split.test, ranking, 0.1);
    const auto model_sel =
        train_mlknn(concat_features(train_sel), train_sel.labels, 10, 1.0);
    const auto pred_sel = predict_mlknn(model_sel, concat_features(test_sel));
    ap_selected_sum += evaluate_all(pred_sel.predictions, pred_sel.confidences,
                                    test_sel.labels.values)
                           .average_precision;

    const auto model_all =
        train_mlknn(concat_features(split.train), split.train.labels, 10, 1.0);
    const auto pred_all = predict_mlknn(model_all, concat_features(split.test));
    ap_all_sum += evaluate_all(pred_all.predictions, pred_all.confidences,
                               split.test.labels.values)
                      .average_precision;
  }
  const double precision = precision_sum / seeds;
  const double ap_selected = ap_selected_sum / seeds;
  const double ap_all = ap_all_sum / seeds;
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(4) << "precision@15 " << precision
     << ", AP selected " << ap_selected << " vs all features " << ap_all;
  detail = ss.str();
  return precision >= 0.8 && ap_selected > ap_all;
}

// Criterion 7: the full method beats or ties every ablated variant on at
// least 70 percent of seeds, by average precision.
bool criterion_ablation_direction(std::string& detail) {
  ExperimentConfig base;
  base.synthetic = family_spec(0);
  base.missing_ratios = {0.3};
  base.trials = 20;
  base.base_seed = 4242;

  const auto full = run_experiment(base);
  const char* names[3] = {"no shared latent", "no graph", "no adaptive weights"};
  int wins[3] = {0, 0, 0};
  bool all_completed = true;
  for (int a = 0; a < 3; ++a) {
    ExperimentConfig cfg = base;
    if (a == 0) cfg.ablation.disable_shared_latent = true;
    if (a == 1) cfg.ablation.disable_graph = true;
    if (a == 2) cfg.ablation.disable_adaptive_weights = true;
    const auto ablated = run_experiment(cfg);
    for (std::size_t i = 0; i < full.cells.size(); ++i) {
      if (full.cells[i].failed || ablated.cells[i].failed) {
        all_completed = false;
        continue;
      }
      if (full.cells[i].metrics.average_precision >=
          ablated.cells[i].metrics.average_precision) {
        ++wins[a];
      }
    }
  }
  std::ostringstream ss;
  for (int a = 0; a < 3; ++a) {
    ss << names[a] << " " << wins[a] << "/20" << (a < 2 ? ", " : "");
  }
  detail = ss.str();
  return all_completed && wins[0] >= 14 && wins[1] >= 14 && wins[2] >= 14;
}

// Criterion 8: all six metrics agree exactly with brute-force enumeration
// oracles on 200 random small fixtures, including tied confidences.
bool criterion_metric_oracle(std::string& detail) {
  int mismatches = 0;
  for (int t = 0; t < 200; ++t) {
    std::mt19937_64 rng(31 * static_cast<std::uint64_t>(t) + 7);
    const Eigen::Index k = 3, n = 5;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> coarse(0, 4);
    std::uniform_int_distribution<int> coin(0, 1);
    Matrix conf(k, n), pred(k, n), truth(k, n);
    const bool tie_heavy = t % 2 == 0;
    for (Eigen::Index j = 0; j < k; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        conf(j, i) = tie_heavy ? 0.25 * coarse(rng) : unif(rng);
        pred(j, i) = coin(rng);
        truth(j, i) = coin(rng);
      }
    }
    const auto rep = evaluate_all(pred, conf, truth);
    const bool ok = rep.hamming_loss == oracle::hamming_loss(pred, truth) &&
                    rep.ranking_loss == oracle::ranking_loss(conf, truth) &&
                    rep.coverage == oracle::coverage(conf, truth) &&
                    rep.average_precision == oracle::average_precision(conf, truth) &&
                    rep.macro_f1 == oracle::macro_f1(pred, truth) &&
                    rep.micro_f1 == oracle::micro_f1(pred, truth);
    if (!ok) ++mismatches;
  }
  std::ostringstream ss;
  ss << mismatches << " mismatches over 200 fixtures, exact comparison";
  detail = ss.str();
  return mismatches == 0;
}

// Criterion 9: the neighbor-count Bayes classifier agrees exactly with a
// brute-force reimplementation on tiny fixtures.
bool criterion_mlknn_oracle(std::string& detail) {
  int mismatches = 0;
  for (int t = 0; t < 100; ++t) {
    std::mt19937_64 rng(53 * static_cast<std::uint64_t>(t) + 11);
    const Eigen::Index n = 6, dim = 2, k = 3, queries = 5;
    std::uniform_int_distribution<int> grid(0, 6);
    std::uniform_int_distribution<int> coin(0, 1);
    Matrix features(dim, n), labels(k, n), query(dim, queries);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index r = 0; r < dim; ++r) features(r, i) = grid(rng);
      for (Eigen::Index j = 0; j < k; ++j) labels(j, i) = coin(rng);
    }
    for (Eigen::Index i = 0; i < queries; ++i) {
      for (Eigen::Index r = 0; r < dim; ++r) query(r, i) = grid(rng);
    }
    LabelMatrix lm;
    lm.values = labels;
    const auto model = train_mlknn(features, lm, 2, 1.0);
    const auto pred = predict_mlknn(model, query);
    oracle::MlknnOracle om;
    om.train = features;
    om.labels = labels;
    om.k_neighbors = 2;
    om.smoothing = 1.0;
    for (Eigen::Index i = 0; i < queries; ++i) {
      Vector p, c;
      oracle::oracle_predict(om, query.col(i), p, c);
      for (Eigen::Index j = 0; j < k; ++j) {
        if (pred.predictions(j, i) != p(j) || pred.confidences(j, i) != c(j)) {
          ++mismatches;
        }
      }
    }
  }
  std::ostringstream ss;
  ss << mismatches << " mismatches over 100 fixtures of 5 queries, exact comparison";
  detail = ss.str();
  return mismatches == 0;
}

// Criterion 10: every ratio removes exactly floor(ratio * n) instances per
// view and never strands an instance with zero views.
bool criterion_missingness(std::string& detail) {
  int bad_counts = 0, uncovered = 0;
  const double ratios[5] = {0.1, 0.2, 0.3, 0.4, 0.5};
  for (int ri = 0; ri < 5; ++ri) {
    for (int s = 0; s < 20; ++s) {
      auto data = generate_synthetic(family_spec(9000 + static_cast<std::uint64_t>(s)));
      MissingnessSpec miss;
      miss.ratio = ratios[ri];
      miss.seed = 9100 + 31 * static_cast<std::uint64_t>(s) +
                  static_cast<std::uint64_t>(ri);
      const auto ds = inject_missingness(data.dataset, miss);
      const auto expected = static_cast<Eigen::Index>(
          std::llround(ratios[ri] * static_cast<double>(ds.n())));
      for (const auto& view : ds.views) {
        if (view.n() - view.present_count() != expected) ++bad_counts;
      }
      for (Eigen::Index i = 0; i < ds.n(); ++i) {
        bool covered = false;
        for (const auto& view : ds.views) {
          covered = covered || view.presence[static_cast<std::size_t>(i)];
        }
        if (!covered) ++uncovered;
      }
    }
  }
  std::ostringstream ss;
  ss << bad_counts << " wrong per-view counts, " << uncovered
     << " uncovered instances over 5 ratios and 20 seeds";
  detail = ss.str();
  return bad_counts == 0 && uncovered == 0;
}

// Criterion 11: two CLI runs from one config produce byte-identical report
// trees, apart from the wall-clock sidecar.
bool criterion_determinism(std::string& detail) {
  const char* cli = std::getenv("ASLSL_CLI_BIN");
  if (cli == nullptr || *cli == '\0') {
    detail = "ASLSL_CLI_BIN is not set";
    return false;
  }
  const fs::path root = fs::temp_directory_path() / "aslsl_acceptance_run";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path cfg_path = root / "config.json";
  {
    std::ofstream out(cfg_path);
    out << R"({
  "data": {"synthetic": {"n": 80, "m": 2, "k": 2, "dims": [12, 10],
                          "informative_per_view": 3, "noise_level": 0.1}},
  "missing_ratios": [0.0, 0.2],
  "grid": {"lambda": [1.0], "eta": [1.0], "delta": [1.0], "gamma": [2.0]},
  "trials": 3,
  "base_seed": 11,
  "optimizer": {"max_iters": 200}
}
)";
  }
  const fs::path dir_a = root / "a", dir_b = root / "b";
  for (const auto& dir : {dir_a, dir_b}) {
    const std::string cmd = std::string("\"") + cli + "\" run --config \"" +
                            cfg_path.string() + "\" --out \"" + dir.string() +
                            "\" > \"" + (dir.string() + ".log") + "\" 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      detail = "CLI run failed, see " + dir.string() + ".log";
      return false;
    }
  }

  auto listing = [](const fs::path& base) {
    std::vector<std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(base)) {
      if (!e.is_regular_file()) continue;
      const auto rel = fs::relative(e.path(), base).generic_string();
      if (rel != "meta.json") out.push_back(rel);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto files_a = listing(dir_a);
  const auto files_b = listing(dir_b);
  if (files_a != files_b) {
    detail = "report file sets differ";
    return false;
  }
  int differing = 0;
  for (const auto& rel : files_a) {
    if (slurp(dir_a / rel) != slurp(dir_b / rel)) ++differing;
  }
  std::ostringstream ss;
  ss << files_a.size() << " files compared, " << differing << " differ";
  detail = ss.str();
  return !files_a.empty() && differing == 0;
}

// Criterion 12: 50 trials of the full pipeline at desk scale, including
// report emission, finish inside two minutes.
bool criterion_runtime(std::string& detail) {
  const auto start = Clock::now();
  ExperimentConfig cfg;
  cfg.synthetic = family_spec(0);
  cfg.missing_ratios = {0.3};
  cfg.trials = 50;
  cfg.base_seed = 2024;
  const auto report = run_experiment(cfg);
  const fs::path out = fs::temp_directory_path() / "aslsl_acceptance_runtime";
  fs::remove_all(out);
  emit_reports(report, out.string());
  const double elapsed = seconds_since(start);
  int completed = 0;
  for (const auto& cell : report.cells) completed += cell.failed ? 0 : 1;
  std::ostringstream ss;
  ss << completed << "/50 trials completed in " << std::fixed
     << std::setprecision(1) << elapsed << "s";
  detail = ss.str();
  return completed == 50 && elapsed < 120.0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance_tests <criterion 1..12>\n";
    return 2;
  }
  const int which = std::atoi(argv[1]);
  bool (*criteria[12])(std::string&) = {
      criterion_monotonicity,   criterion_convergence,
      criterion_weight_oracle,  criterion_nmf_reduction,
      criterion_mask_correctness, criterion_planted_recovery,
      criterion_ablation_direction, criterion_metric_oracle,
      criterion_mlknn_oracle,   criterion_missingness,
      criterion_determinism,    criterion_runtime,
  };
  if (which < 1 || which > 12) {
    std::cerr << "criterion number must be between 1 and 12\n";
    return 2;
  }
  std::string detail;
  bool ok = false;
  try {
    ok = criteria[which - 1](detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
    ok = false;
  }
  std::cout << "criterion " << which << ": " << (ok ? "PASS" : "FAIL") << "  "
            << detail << "\n";
  return ok ? 0 : 1;
}
