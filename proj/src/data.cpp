#include "dwcl/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace fs = std::filesystem;

namespace dwcl {

namespace {

Matrix fill_normal(std::size_t rows, std::size_t cols, RandomSource& rng, double scale = 1.0) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal() * scale;
    return m;
}

// d x latent matrix with orthonormal columns (Gram-Schmidt on Gaussian draws).
Matrix random_orthonormal_columns(std::size_t d, std::size_t latent, RandomSource& rng) {
    Matrix a(d, latent);
    for (std::size_t c = 0; c < latent; ++c) {
        std::vector<double> v(d);
        for (;;) {
            for (std::size_t r = 0; r < d; ++r) v[r] = rng.normal();
            for (std::size_t p = 0; p < c; ++p) {
                double dot = 0.0;
                for (std::size_t r = 0; r < d; ++r) dot += v[r] * a(r, p);
                for (std::size_t r = 0; r < d; ++r) v[r] -= dot * a(r, p);
            }
            double norm = 0.0;
            for (double x : v) norm += x * x;
            norm = std::sqrt(norm);
            if (norm > 1e-8) {
                for (std::size_t r = 0; r < d; ++r) a(r, c) = v[r] / norm;
                break;
            }
        }
    }
    return a;
}

}  // namespace

MultiViewDataset generate_synthetic(const SyntheticSpec& spec) {
    if (spec.k < 2) throw std::invalid_argument("generate_synthetic: k must be at least 2");
    if (spec.n < spec.k) throw std::invalid_argument("generate_synthetic: n must be >= k");
    if (spec.latent_dim < 1) throw std::invalid_argument("generate_synthetic: latent_dim must be positive");
    if (spec.views.empty()) throw std::invalid_argument("generate_synthetic: no views");
    bool any_informative = false;
    for (const auto& v : spec.views) {
        if (v.dim < 1) throw std::invalid_argument("generate_synthetic: view dim must be positive");
        if (v.informative) {
            any_informative = true;
            if (v.dim < spec.latent_dim) {
                throw std::invalid_argument(
                    "generate_synthetic: informative view dim must be >= latent_dim");
            }
        }
    }
    if (!any_informative) {
        throw std::invalid_argument("generate_synthetic: need at least one informative view");
    }

    RandomSource rng(spec.seed);

    // cluster means scaled so the closest pair sits at cluster_separation
    Matrix means = fill_normal(spec.k, spec.latent_dim, rng);
    double min_dist = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < spec.k; ++a) {
        for (std::size_t b = a + 1; b < spec.k; ++b) {
            double s = 0.0;
            for (std::size_t c = 0; c < spec.latent_dim; ++c) {
                const double diff = means(a, c) - means(b, c);
                s += diff * diff;
            }
            min_dist = std::min(min_dist, std::sqrt(s));
        }
    }
    if (!(min_dist > 1e-12)) {
        throw std::runtime_error("generate_synthetic: degenerate cluster means");
    }
    const double scale = spec.cluster_separation / min_dist;
    for (std::size_t i = 0; i < means.size(); ++i) means.data()[i] *= scale;

    MultiViewDataset ds;
    ds.name = "synthetic";
    ds.k = spec.k;
    ds.labels.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) ds.labels[i] = static_cast<int>(i % spec.k);

    Matrix latent(spec.n, spec.latent_dim);
    for (std::size_t i = 0; i < spec.n; ++i) {
        const double* mu = means.row(static_cast<std::size_t>(ds.labels[i]));
        double* z = latent.row(i);
        for (std::size_t c = 0; c < spec.latent_dim; ++c) z[c] = mu[c] + rng.normal();
    }

    for (std::size_t v = 0; v < spec.views.size(); ++v) {
        const auto& vs = spec.views[v];
        Matrix x(spec.n, vs.dim);
        if (vs.informative) {
            const Matrix a = random_orthonormal_columns(vs.dim, spec.latent_dim, rng);
            for (std::size_t i = 0; i < spec.n; ++i) {
                const double* z = latent.row(i);
                double* xi = x.row(i);
                for (std::size_t r = 0; r < vs.dim; ++r) {
                    double s = 0.0;
                    for (std::size_t c = 0; c < spec.latent_dim; ++c) s += a(r, c) * z[c];
                    xi[r] = s + vs.noise_sigma * rng.normal();
                }
            }
        } else {
            // pure noise, independent of the latent
            for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
        }
        ds.views.push_back(std::move(x));
        ds.view_names.push_back("view" + std::to_string(v + 1));
    }
    return ds;
}

MultiViewDataset normalize(MultiViewDataset dataset, Normalization method) {
    if (method == Normalization::None) return dataset;
    for (Matrix& view : dataset.views) {
        const std::size_t n = view.rows();
        for (std::size_t c = 0; c < view.cols(); ++c) {
            if (method == Normalization::MinMax) {
                double lo = view(0, c), hi = view(0, c);
                for (std::size_t i = 1; i < n; ++i) {
                    lo = std::min(lo, view(i, c));
                    hi = std::max(hi, view(i, c));
                }
                const double range = hi - lo;
                for (std::size_t i = 0; i < n; ++i) {
                    view(i, c) = range == 0.0 ? 0.0 : (view(i, c) - lo) / range;
                }
            } else {
                double mean = 0.0;
                for (std::size_t i = 0; i < n; ++i) mean += view(i, c);
                mean /= static_cast<double>(n);
                double var = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = view(i, c) - mean;
                    var += d * d;
                }
                const double sd = std::sqrt(var / static_cast<double>(n));
                for (std::size_t i = 0; i < n; ++i) {
                    view(i, c) = sd == 0.0 ? 0.0 : (view(i, c) - mean) / sd;
                }
            }
        }
    }
    return dataset;
}

std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n, std::size_t batch_size,
                                                    RandomSource& rng) {
    if (batch_size < 2) throw std::invalid_argument("epoch_batches: batch size must be >= 2");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t start = 0; start < n; start += batch_size) {
        const std::size_t end = std::min(n, start + batch_size);
        if (end - start < 2) break;  // InfoNCE needs negatives
        blocks.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                            order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return blocks;
}

Matrix gather_rows(const Matrix& view, const std::vector<std::size_t>& idx) {
    Matrix out(idx.size(), view.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        std::copy_n(view.row(idx[i]), view.cols(), out.row(i));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Directory format: manifest.json + headerless per-view CSV + labels.csv
// ---------------------------------------------------------------------------

namespace {

void write_view_csv(const fs::path& path, const Matrix& view) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_dataset: cannot open " + path.string());
    char buf[64];
    for (std::size_t i = 0; i < view.rows(); ++i) {
        for (std::size_t c = 0; c < view.cols(); ++c) {
            const auto res = std::to_chars(buf, buf + sizeof(buf), view(i, c));
            if (c) os.put(',');
            os.write(buf, res.ptr - buf);
        }
        os.put('\n');
    }
    if (!os) throw std::runtime_error("save_dataset: write failed for " + path.string());
}

Matrix read_view_csv(const fs::path& path, std::size_t expect_rows, std::size_t expect_cols) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_dataset: missing view file " + path.string());
    Matrix view(expect_rows, expect_cols);
    std::string line;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        if (line.empty() && row == expect_rows) break;
        if (row >= expect_rows) {
            throw std::runtime_error("load_dataset: too many rows in " + path.string());
        }
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (std::size_t c = 0; c < expect_cols; ++c) {
            double value = 0.0;
            const auto res = std::from_chars(p, end, value);
            if (res.ec != std::errc() || !std::isfinite(value)) {
                throw std::runtime_error("load_dataset: bad value in " + path.string() +
                                         " row " + std::to_string(row));
            }
            view(row, c) = value;
            p = res.ptr;
            if (c + 1 < expect_cols) {
                if (p >= end || *p != ',') {
                    throw std::runtime_error("load_dataset: wrong column count in " +
                                             path.string() + " row " + std::to_string(row));
                }
                ++p;
            }
        }
        if (p != end) {
            throw std::runtime_error("load_dataset: trailing data in " + path.string() +
                                     " row " + std::to_string(row));
        }
        ++row;
    }
    if (row != expect_rows) {
        throw std::runtime_error("load_dataset: row count mismatch in " + path.string());
    }
    return view;
}

}  // namespace

void save_dataset(const MultiViewDataset& dataset, const std::string& dir) {
    if (dataset.views.empty()) throw std::invalid_argument("save_dataset: no views");
    fs::create_directories(dir);
    nlohmann::json manifest;
    manifest["name"] = dataset.name.empty() ? "dataset" : dataset.name;
    manifest["n"] = dataset.n();
    manifest["k"] = dataset.k;
    manifest["views"] = nlohmann::json::array();
    for (std::size_t v = 0; v < dataset.views.size(); ++v) {
        const std::string name =
            v < dataset.view_names.size() ? dataset.view_names[v] : "view" + std::to_string(v + 1);
        const std::string file = "view_" + name + ".csv";
        manifest["views"].push_back(
            {{"name", name}, {"file", file}, {"dim", dataset.views[v].cols()}});
        write_view_csv(fs::path(dir) / file, dataset.views[v]);
    }
    if (dataset.has_labels()) {
        manifest["labels_file"] = "labels.csv";
        std::ofstream os(fs::path(dir) / "labels.csv");
        for (int l : dataset.labels) os << l << '\n';
        if (!os) throw std::runtime_error("save_dataset: write failed for labels.csv");
    }
    std::ofstream os(fs::path(dir) / "manifest.json");
    os << manifest.dump(2) << '\n';
    if (!os) throw std::runtime_error("save_dataset: write failed for manifest.json");
}

MultiViewDataset load_dataset(const std::string& dir) {
    std::ifstream is(fs::path(dir) / "manifest.json");
    if (!is) throw std::runtime_error("load_dataset: missing manifest.json in " + dir);
    nlohmann::json manifest;
    try {
        is >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("load_dataset: bad manifest.json: ") + e.what());
    }

    MultiViewDataset ds;
    ds.name = manifest.value("name", "dataset");
    const std::size_t n = manifest.at("n").get<std::size_t>();
    ds.k = manifest.at("k").get<std::size_t>();
    for (const auto& entry : manifest.at("views")) {
        const std::string name = entry.at("name").get<std::string>();
        const std::string file = entry.at("file").get<std::string>();
        const std::size_t dim = entry.at("dim").get<std::size_t>();
        ds.view_names.push_back(name);
        ds.views.push_back(read_view_csv(fs::path(dir) / file, n, dim));
    }
    if (ds.views.empty()) throw std::runtime_error("load_dataset: manifest lists no views");
    if (manifest.contains("labels_file")) {
        const fs::path path = fs::path(dir) / manifest["labels_file"].get<std::string>();
        std::ifstream ls(path);
        if (!ls) throw std::runtime_error("load_dataset: missing labels file " + path.string());
        int value = 0;
        while (ls >> value) {
            if (value < 0 || (ds.k > 0 && static_cast<std::size_t>(value) >= ds.k)) {
                throw std::runtime_error("load_dataset: label out of range in " + path.string());
            }
            ds.labels.push_back(value);
        }
        if (ds.labels.size() != n) {
            throw std::runtime_error("load_dataset: label count mismatch in " + path.string());
        }
    }
    return ds;
}

}  // namespace dwcl
