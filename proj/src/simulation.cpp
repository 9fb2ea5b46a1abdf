#include "aslsl/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aslsl/rng.hpp"

namespace aslsl {

namespace {

constexpr std::uint64_t kStreamLatent = 1;
constexpr std::uint64_t kStreamPlacement = 2;
constexpr std::uint64_t kStreamFeatures = 3;

// Feature columns are emitted at this amplitude so the reconstruction
// residual dominates the row-sparsity penalty at small problem sizes.
// Unit-amplitude designs leave the fit crawling along a shallow penalty
// valley for thousands of sweeps before the stopping rule fires.
constexpr double kFeatureScale = 50.0;
// Distractor rows carry a fraction of the signal amplitude.
constexpr double kNoiseRowLevel = 0.4;
// Latent profiles are cluster-anchored: one dominant coordinate in
// [kAnchorFloor, 1), the rest in [0, kOffAnchorLevel). Anchoring keeps the
// factor model identifiable, so the alternating updates converge
// geometrically instead of wandering a rotational plateau.
constexpr double kAnchorFloor = 0.75;
constexpr double kOffAnchorLevel = 0.2;
// Label mixing is diagonal-dominant: each label tracks one latent axis.
constexpr double kMixDiagFloor = 0.7;
constexpr double kMixOffLevel = 0.2;
// Informative rows anchor latent coordinates in rotation; the off-anchor
// loadings stay below this level.
constexpr double kRowOffLevel = 0.10;

// `count` distinct values from [0, n), ascending.
std::vector<Eigen::Index> sample_without_replacement(std::mt19937_64& rng,
                                                     Eigen::Index n,
                                                     Eigen::Index count) {
  std::vector<Eigen::Index> pool(n);
  for (Eigen::Index i = 0; i < n; ++i) pool[i] = i;
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto j = i + static_cast<Eigen::Index>(
                           uniform_index(rng, static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

double row_median(const Matrix& z, Eigen::Index row) {
  std::vector<double> vals(z.cols());
  for (Eigen::Index i = 0; i < z.cols(); ++i) vals[i] = z(row, i);
  const auto mid = vals.begin() + vals.size() / 2;
  std::nth_element(vals.begin(), mid, vals.end());
  if (vals.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(vals.begin(), mid);
  return 0.5 * (lo + hi);
}

void validate_spec(const SyntheticSpec& spec, const std::vector<Eigen::Index>& dims) {
  if (spec.n < 2) throw std::invalid_argument("synthetic n must be >= 2");
  if (spec.m < 1) throw std::invalid_argument("synthetic m must be >= 1");
  if (spec.k < 1) throw std::invalid_argument("synthetic k must be >= 1");
  if (static_cast<Eigen::Index>(dims.size()) != spec.m) {
    throw std::invalid_argument("dims must list one feature count per view");
  }
  for (Eigen::Index d : dims) {
    if (d < 1) throw std::invalid_argument("view feature counts must be >= 1");
    if (spec.informative_per_view > d) {
      throw std::invalid_argument("informative_per_view exceeds a view dimension");
    }
  }
  if (spec.informative_per_view < 0) {
    throw std::invalid_argument("informative_per_view must be >= 0");
  }
  if (spec.noise_level < 0.0) {
    throw std::invalid_argument("noise_level must be >= 0");
  }
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  std::vector<Eigen::Index> dims = spec.dims;
  if (dims.empty()) dims.assign(spec.m, 50);
  validate_spec(spec, dims);

  // Latent draw retries until no label row is constant.
  Matrix latent;  // n x k
  Matrix labels;  // k x n
  bool ok = false;
  for (int attempt = 0; attempt < 10 && !ok; ++attempt) {
    std::mt19937_64 rng(mix_seed(mix_seed(spec.seed, kStreamLatent), attempt));
    // Balanced cluster assignment: shuffled repetition of 0..k-1.
    std::vector<Eigen::Index> cluster(spec.n);
    for (Eigen::Index i = 0; i < spec.n; ++i) cluster[i] = i % spec.k;
    for (Eigen::Index i = spec.n - 1; i > 0; --i) {
      const auto j = static_cast<Eigen::Index>(
          uniform_index(rng, static_cast<std::uint64_t>(i + 1)));
      std::swap(cluster[i], cluster[j]);
    }
    latent.resize(spec.n, spec.k);
    for (Eigen::Index i = 0; i < spec.n; ++i) {
      for (Eigen::Index j = 0; j < spec.k; ++j) {
        latent(i, j) = j == cluster[i]
                           ? kAnchorFloor + (1.0 - kAnchorFloor) * uniform01(rng)
                           : kOffAnchorLevel * uniform01(rng);
      }
    }
    Matrix coef(spec.k, spec.k);
    for (Eigen::Index i = 0; i < spec.k; ++i) {
      for (Eigen::Index j = 0; j < spec.k; ++j) {
        coef(i, j) = i == j ? kMixDiagFloor + (1.0 - kMixDiagFloor) * uniform01(rng)
                            : kMixOffLevel * uniform01(rng);
      }
    }
    const Matrix z = coef * latent.transpose();  // k x n
    labels.resize(spec.k, spec.n);
    ok = true;
    for (Eigen::Index j = 0; j < spec.k; ++j) {
      const double med = row_median(z, j);
      double sum = 0.0;
      for (Eigen::Index i = 0; i < spec.n; ++i) {
        labels(j, i) = z(j, i) > med ? 1.0 : 0.0;
        sum += labels(j, i);
      }
      if (sum == 0.0 || sum == static_cast<double>(spec.n)) ok = false;
    }
  }
  if (!ok) {
    throw std::runtime_error(
        "label generation degenerate: constant rows after 10 retries");
  }

  SyntheticData out;
  out.dataset.name = "synthetic";
  out.dataset.labels.values = labels;
  out.informative.resize(spec.m);

  std::mt19937_64 rng_place(mix_seed(spec.seed, kStreamPlacement));
  std::mt19937_64 rng_feat(mix_seed(spec.seed, kStreamFeatures));
  for (Eigen::Index v = 0; v < spec.m; ++v) {
    out.informative[v] =
        sample_without_replacement(rng_place, dims[v], spec.informative_per_view);
    ViewBlock block;
    block.view_id = static_cast<int>(v);
    block.presence.assign(spec.n, 1);
    block.features.resize(dims[v], spec.n);
    auto planted = out.informative[v].begin();
    Eigen::Index ordinal = 0;
    for (Eigen::Index r = 0; r < dims[v]; ++r) {
      const bool informative =
          planted != out.informative[v].end() && *planted == r;
      if (informative) ++planted;
      if (informative) {
        // Loadings anchor the latent axes in rotation so every axis is
        // strongly observed in every view.
        const Eigen::Index anchor = ordinal++ % spec.k;
        Vector a(spec.k);
        for (Eigen::Index j = 0; j < spec.k; ++j) {
          a(j) = j == anchor ? kAnchorFloor + (1.0 - kAnchorFloor) * uniform01(rng_feat)
                             : kRowOffLevel * uniform01(rng_feat);
        }
        for (Eigen::Index i = 0; i < spec.n; ++i) {
          const double clean = latent.row(i).dot(a);
          const double value = clean + spec.noise_level * gaussian(rng_feat);
          block.features(r, i) = kFeatureScale * std::max(0.0, value);
        }
      } else {
        for (Eigen::Index i = 0; i < spec.n; ++i) {
          block.features(r, i) = kFeatureScale * kNoiseRowLevel * uniform01(rng_feat);
        }
      }
    }
    out.dataset.views.push_back(std::move(block));
  }
  return out;
}

MultiViewDataset inject_missingness(const MultiViewDataset& ds,
                                    const MissingnessSpec& spec) {
  if (spec.ratio < 0.0 || spec.ratio > 0.5) {
    throw std::invalid_argument("missing ratio must lie in [0, 0.5]");
  }
  const Eigen::Index n = ds.n();
  if (n < 1) throw std::invalid_argument("dataset has no instances");
  const auto count = static_cast<Eigen::Index>(
      std::floor(spec.ratio * static_cast<double>(n) + 1e-9));
  MultiViewDataset out = ds;
  if (count == 0) return out;

  std::mt19937_64 rng(mix_seed(spec.seed, 0));
  const auto m = ds.m();
  std::vector<std::vector<std::uint8_t>> gone(m);
  std::vector<int> cover(n, 0);
  const auto recount = [&] {
    std::fill(cover.begin(), cover.end(), 0);
    for (Eigen::Index v = 0; v < m; ++v) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (ds.views[v].presence[i] && !gone[v][i]) ++cover[i];
      }
    }
  };

  bool covered = false;
  for (int attempt = 0; attempt < 10 && !covered; ++attempt) {
    for (Eigen::Index v = 0; v < m; ++v) {
      gone[v].assign(n, 0);
      for (Eigen::Index i : sample_without_replacement(rng, n, count)) {
        gone[v][i] = 1;
      }
    }
    recount();
    covered = std::all_of(cover.begin(), cover.end(), [](int c) { return c > 0; });
  }

  if (!covered) {
    // Count-preserving repair of the final draw: restore each uncovered
    // instance in one of its sampled-absent views and mark a donor that
    // keeps at least one other view instead.
    for (Eigen::Index i = 0; i < n; ++i) {
      if (cover[i] > 0) continue;
      std::vector<Eigen::Index> views;
      for (Eigen::Index v = 0; v < m; ++v) {
        if (ds.views[v].presence[i] && gone[v][i]) views.push_back(v);
      }
      if (views.empty()) {
        throw std::runtime_error(
            "instance absent from every view in the source data");
      }
      const Eigen::Index v = views[uniform_index(rng, views.size())];
      gone[v][i] = 0;
      cover[i] = 1;
      std::vector<Eigen::Index> donors;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j != i && ds.views[v].presence[j] && !gone[v][j] && cover[j] >= 2) {
          donors.push_back(j);
        }
      }
      if (donors.empty()) {
        throw std::runtime_error(
            "missing ratio cannot keep every instance covered");
      }
      const Eigen::Index j = donors[uniform_index(rng, donors.size())];
      gone[v][j] = 1;
      --cover[j];
    }
  }

  for (Eigen::Index v = 0; v < m; ++v) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (gone[v][i]) out.views[v].presence[i] = 0;
    }
    zero_absent_columns(out.views[v]);
  }
  return out;
}

SplitResult split_subjects(const MultiViewDataset& ds, double train_fraction,
                           std::uint64_t seed) {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    throw std::invalid_argument("train fraction must lie in (0, 1)");
  }
  const Eigen::Index n = ds.n();
  if (n < 2) throw std::invalid_argument("need at least 2 instances to split");

  std::mt19937_64 rng(mix_seed(seed, 0));
  std::vector<int> train_idx, test_idx;
  if (ds.groups.empty()) {
    std::vector<int> perm(n);
    for (Eigen::Index i = 0; i < n; ++i) perm[i] = static_cast<int>(i);
    for (Eigen::Index i = n - 1; i > 0; --i) {
      const auto j = static_cast<Eigen::Index>(
          uniform_index(rng, static_cast<std::uint64_t>(i + 1)));
      std::swap(perm[i], perm[j]);
    }
    const auto n_train = static_cast<Eigen::Index>(
        std::floor(train_fraction * static_cast<double>(n) + 1e-9));
    if (n_train < 1 || n_train >= n) {
      throw std::runtime_error("degenerate split sizes");
    }
    train_idx.assign(perm.begin(), perm.begin() + n_train);
    test_idx.assign(perm.begin() + n_train, perm.end());
  } else {
    std::vector<int> groups = ds.groups;
    std::sort(groups.begin(), groups.end());
    groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
    const auto g = static_cast<Eigen::Index>(groups.size());
    for (Eigen::Index i = g - 1; i > 0; --i) {
      const auto j = static_cast<Eigen::Index>(
          uniform_index(rng, static_cast<std::uint64_t>(i + 1)));
      std::swap(groups[i], groups[j]);
    }
    const auto g_train = static_cast<Eigen::Index>(
        std::floor(train_fraction * static_cast<double>(g) + 1e-9));
    if (g_train < 1 || g_train >= g) {
      throw std::runtime_error("degenerate split sizes");
    }
    std::vector<int> in_train(groups.begin(), groups.begin() + g_train);
    std::sort(in_train.begin(), in_train.end());
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool tr = std::binary_search(in_train.begin(), in_train.end(),
                                         ds.groups[i]);
      (tr ? train_idx : test_idx).push_back(static_cast<int>(i));
    }
    if (train_idx.empty() || test_idx.empty()) {
      throw std::runtime_error("degenerate split sizes");
    }
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());

  SplitResult res;
  res.train = subset_instances(ds, train_idx);
  res.test = subset_instances(ds, test_idx);
  res.train_indices = std::move(train_idx);
  res.test_indices = std::move(test_idx);
  return res;
}

}  // namespace aslsl
