#include "aslsl/dataset.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "aslsl/matrix_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace aslsl {

Eigen::Index ViewBlock::present_count() const {
    Eigen::Index c = 0;
    for (auto p : presence) c += p ? 1 : 0;
    return c;
}

std::vector<Eigen::Index> MultiViewDataset::dims() const {
    std::vector<Eigen::Index> d;
    d.reserve(views.size());
    for (const auto& v : views) d.push_back(v.dim());
    return d;
}

Eigen::Index MultiViewDataset::total_features() const {
    Eigen::Index t = 0;
    for (const auto& v : views) t += v.dim();
    return t;
}

Matrix mask_matrix(const ViewBlock& view) {
    const Eigen::Index n = view.n();
    Matrix s = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        if (view.presence[static_cast<std::size_t>(j)]) s(j, j) = 1.0;
    return s;
}

void zero_absent_columns(ViewBlock& view) {
    for (Eigen::Index j = 0; j < view.n(); ++j)
        if (!view.presence[static_cast<std::size_t>(j)])
            view.features.col(j).setZero();
}

std::vector<std::string> validate_dataset(const MultiViewDataset& ds) {
    std::vector<std::string> warnings;
    const Eigen::Index n = ds.labels.n();
    const Eigen::Index k = ds.labels.k();
    if (n < 1) throw std::runtime_error("dataset has no instances");
    if (k < 1) throw std::runtime_error("dataset has no label dimensions");
    if (ds.views.empty()) throw std::runtime_error("dataset has no views");

    for (const auto& v : ds.views) {
        if (v.n() != n)
            throw std::runtime_error("view " + std::to_string(v.view_id) + " has " +
                                     std::to_string(v.n()) + " instances, labels have " + std::to_string(n));
        if (v.presence.size() != static_cast<std::size_t>(n))
            throw std::runtime_error("view " + std::to_string(v.view_id) + " presence length mismatch");
        for (Eigen::Index i = 0; i < v.dim(); ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const double x = v.features(i, j);
                if (!std::isfinite(x))
                    throw std::runtime_error("view " + std::to_string(v.view_id) + ": non-finite value at row " +
                                             std::to_string(i + 1) + ", column " + std::to_string(j + 1));
                if (v.presence[static_cast<std::size_t>(j)] && x < 0.0)
                    throw std::runtime_error("view " + std::to_string(v.view_id) + ": negative entry " +
                                             format_double(x) + " at row " + std::to_string(i + 1) +
                                             ", column " + std::to_string(j + 1) +
                                             " (load with shift_nonneg to shift rows into range)");
            }
    }

    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            const double y = ds.labels.values(j, i);
            if (y != 0.0 && y != 1.0)
                throw std::runtime_error("labels: non-binary label entry " + format_double(y) +
                                         " at row " + std::to_string(j + 1) + ", column " + std::to_string(i + 1));
        }

    for (Eigen::Index j = 0; j < n; ++j) {
        bool covered = false;
        for (const auto& v : ds.views)
            if (v.presence[static_cast<std::size_t>(j)]) { covered = true; break; }
        if (!covered)
            throw std::runtime_error("instance " + std::to_string(j + 1) + " absent from all views");
    }

    if (!ds.groups.empty() && ds.groups.size() != static_cast<std::size_t>(n))
        throw std::runtime_error("groups length mismatch: " + std::to_string(ds.groups.size()) +
                                 " entries for " + std::to_string(n) + " instances");

    for (Eigen::Index j = 0; j < k; ++j) {
        const double first = ds.labels.values(j, 0);
        bool constant = true;
        for (Eigen::Index i = 1; i < n; ++i)
            if (ds.labels.values(j, i) != first) { constant = false; break; }
        if (constant)
            warnings.push_back("label row " + std::to_string(j + 1) + " is constant (" + format_double(first) + ")");
    }
    return warnings;
}

namespace {

void preprocess_view(ViewBlock& v, const LoadOptions& opts) {
    // Row statistics over present instances only; absent columns are storage
    // artifacts and must not influence the transform.
    const Eigen::Index n = v.n();
    for (Eigen::Index i = 0; i < v.dim(); ++i) {
        if (opts.standardize) {
            double sum = 0.0, sumsq = 0.0;
            Eigen::Index cnt = 0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (v.presence[static_cast<std::size_t>(j)]) {
                    sum += v.features(i, j);
                    sumsq += v.features(i, j) * v.features(i, j);
                    ++cnt;
                }
            if (cnt > 0) {
                const double mean = sum / static_cast<double>(cnt);
                const double var = std::max(0.0, sumsq / static_cast<double>(cnt) - mean * mean);
                const double sd = std::sqrt(var);
                for (Eigen::Index j = 0; j < n; ++j)
                    if (v.presence[static_cast<std::size_t>(j)])
                        v.features(i, j) = sd > 0.0 ? (v.features(i, j) - mean) / sd : 0.0;
            }
        }
        if (opts.standardize || opts.shift_nonneg) {
            double mn = 0.0;
            bool any = false;
            for (Eigen::Index j = 0; j < n; ++j)
                if (v.presence[static_cast<std::size_t>(j)]) {
                    mn = any ? std::min(mn, v.features(i, j)) : v.features(i, j);
                    any = true;
                }
            if (any && mn < 0.0)
                for (Eigen::Index j = 0; j < n; ++j)
                    if (v.presence[static_cast<std::size_t>(j)]) v.features(i, j) -= mn;
        }
    }
}

} // namespace

MultiViewDataset load_dataset(const std::string& manifest_path, const LoadOptions& opts) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error(manifest_path + ": cannot open manifest");
    json manifest;
    try {
        in >> manifest;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(manifest_path + ": manifest parse error: " + e.what());
    }

    const fs::path base = fs::path(manifest_path).parent_path();
    auto resolve = [&](const std::string& p) { return (base / p).string(); };

    MultiViewDataset ds;
    ds.name = manifest.value("name", "");
    if (!manifest.contains("views") || !manifest["views"].is_array() || manifest["views"].empty())
        throw std::runtime_error(manifest_path + ": manifest has no views");
    if (!manifest.contains("labels") || !manifest.contains("masks"))
        throw std::runtime_error(manifest_path + ": manifest needs labels and masks paths");

    ds.labels.values = read_csv_matrix(resolve(manifest["labels"].get<std::string>()));
    const Eigen::Index n = ds.labels.n();

    const Matrix masks = read_csv_matrix(resolve(manifest["masks"].get<std::string>()));
    if (masks.cols() != n)
        throw std::runtime_error("masks: " + std::to_string(masks.cols()) + " columns, labels have " +
                                 std::to_string(n) + " instances");
    if (masks.rows() != static_cast<Eigen::Index>(manifest["views"].size()))
        throw std::runtime_error("masks: " + std::to_string(masks.rows()) + " rows for " +
                                 std::to_string(manifest["views"].size()) + " views");

    int idx = 0;
    for (const auto& vj : manifest["views"]) {
        ViewBlock v;
        v.view_id = vj.value("id", idx);
        Matrix x = read_csv_matrix(resolve(vj["path"].get<std::string>()));
        const std::string orientation = vj.value("orientation", std::string("feature_major"));
        if (orientation == "instance_major")
            x.transposeInPlace();
        else if (orientation != "feature_major")
            throw std::runtime_error("view " + std::to_string(v.view_id) + ": unknown orientation '" + orientation + "'");
        v.features = std::move(x);
        v.presence.resize(static_cast<std::size_t>(n));
        for (Eigen::Index j = 0; j < n; ++j) {
            const double mv = masks(idx, j);
            if (mv != 0.0 && mv != 1.0)
                throw std::runtime_error("masks: non-binary entry " + format_double(mv) + " at row " +
                                         std::to_string(idx + 1) + ", column " + std::to_string(j + 1));
            v.presence[static_cast<std::size_t>(j)] = mv != 0.0;
        }
        preprocess_view(v, opts);
        zero_absent_columns(v);
        ds.views.push_back(std::move(v));
        ++idx;
    }

    if (manifest.contains("groups")) {
        const Matrix g = read_csv_matrix(resolve(manifest["groups"].get<std::string>()));
        if (g.size() != n)
            throw std::runtime_error("groups: expected " + std::to_string(n) + " entries, got " +
                                     std::to_string(g.size()));
        ds.groups.resize(static_cast<std::size_t>(n));
        for (Eigen::Index j = 0; j < n; ++j)
            ds.groups[static_cast<std::size_t>(j)] = static_cast<int>(g(j / g.cols(), j % g.cols()));
    }

    for (const auto& w : validate_dataset(ds))
        std::cerr << "warning: " << ds.name << ": " << w << "\n";
    return ds;
}

std::string save_dataset(const MultiViewDataset& ds, const std::string& dir) {
    fs::create_directories(dir);
    json manifest;
    manifest["name"] = ds.name;
    manifest["labels"] = "labels.csv";
    manifest["masks"] = "masks.csv";
    manifest["views"] = json::array();

    Matrix masks(ds.m(), ds.n());
    for (Eigen::Index v = 0; v < ds.m(); ++v) {
        const auto& view = ds.views[static_cast<std::size_t>(v)];
        const std::string fname = "view" + std::to_string(view.view_id) + ".csv";
        write_csv_matrix((fs::path(dir) / fname).string(), view.features);
        manifest["views"].push_back({{"id", view.view_id}, {"path", fname}, {"orientation", "feature_major"}});
        for (Eigen::Index j = 0; j < ds.n(); ++j)
            masks(v, j) = view.presence[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
    }
    write_csv_matrix((fs::path(dir) / "labels.csv").string(), ds.labels.values);
    write_csv_matrix((fs::path(dir) / "masks.csv").string(), masks);
    if (!ds.groups.empty()) {
        Matrix g(1, ds.n());
        for (Eigen::Index j = 0; j < ds.n(); ++j) g(0, j) = ds.groups[static_cast<std::size_t>(j)];
        write_csv_matrix((fs::path(dir) / "groups.csv").string(), g);
        manifest["groups"] = "groups.csv";
    }

    const std::string manifest_path = (fs::path(dir) / "manifest.json").string();
    std::ofstream out(manifest_path);
    out << manifest.dump(2) << "\n";
    if (!out) throw std::runtime_error(manifest_path + ": write failed");
    return manifest_path;
}

MultiViewDataset subset_instances(const MultiViewDataset& ds, const std::vector<int>& indices) {
    MultiViewDataset out;
    out.name = ds.name;
    const Eigen::Index n_out = static_cast<Eigen::Index>(indices.size());
    out.labels.values.resize(ds.k(), n_out);
    for (Eigen::Index j = 0; j < n_out; ++j)
        out.labels.values.col(j) = ds.labels.values.col(indices[static_cast<std::size_t>(j)]);
    for (const auto& v : ds.views) {
        ViewBlock nv;
        nv.view_id = v.view_id;
        nv.features.resize(v.dim(), n_out);
        nv.presence.resize(static_cast<std::size_t>(n_out));
        for (Eigen::Index j = 0; j < n_out; ++j) {
            const int src = indices[static_cast<std::size_t>(j)];
            nv.features.col(j) = v.features.col(src);
            nv.presence[static_cast<std::size_t>(j)] = v.presence[static_cast<std::size_t>(src)];
        }
        out.views.push_back(std::move(nv));
    }
    if (!ds.groups.empty()) {
        out.groups.resize(indices.size());
        for (std::size_t j = 0; j < indices.size(); ++j)
            out.groups[j] = ds.groups[static_cast<std::size_t>(indices[j])];
    }
    return out;
}

Matrix concat_features(const MultiViewDataset& ds) {
    Matrix all(ds.total_features(), ds.n());
    Eigen::Index row = 0;
    for (const auto& v : ds.views) {
        all.middleRows(row, v.dim()) = v.features;
        row += v.dim();
    }
    return all;
}

} // namespace aslsl
