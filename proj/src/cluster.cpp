#include "dwcl/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dwcl/kernels.hpp"
#include "dwcl/rng.hpp"

namespace dwcl {

namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        const double diff = a[c] - b[c];
        s += diff * diff;
    }
    return s;
}

Matrix kmeanspp_init(const Matrix& points, std::size_t k, RandomSource& rng) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    Matrix centroids(k, d);
    std::vector<bool> chosen(n, false);
    std::vector<double> dist2(n, std::numeric_limits<double>::infinity());

    std::size_t first = static_cast<std::size_t>(rng.uniform_below(n));
    std::copy_n(points.row(first), d, centroids.row(0));
    chosen[first] = true;

    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d2 = sq_dist(points.row(i), centroids.row(c - 1), d);
            if (d2 < dist2[i]) dist2[i] = d2;
            total += dist2[i];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            const double r = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += dist2[i];
                if (acc >= r) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) pick = n - 1;
        }
        if (pick == n || chosen[pick]) {
            // all remaining mass is on duplicates; take the first free point
            for (std::size_t i = 0; i < n; ++i) {
                if (!chosen[i]) {
                    pick = i;
                    break;
                }
            }
        }
        std::copy_n(points.row(pick), d, centroids.row(c));
        chosen[pick] = true;
    }
    return centroids;
}

void assign_nearest(const Matrix& points, const Matrix& centroids,
                    std::vector<int>& labels) {
    const std::int64_t n = static_cast<std::int64_t>(points.rows());
    const std::size_t k = centroids.rows();
    const std::size_t d = points.cols();
    #pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const double* p = points.row(static_cast<std::size_t>(i));
        double best = std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (std::size_t c = 0; c < k; ++c) {
            const double d2 = sq_dist(p, centroids.row(c), d);
            if (d2 < best) {
                best = d2;
                best_c = static_cast<int>(c);
            }
        }
        labels[static_cast<std::size_t>(i)] = best_c;
    }
}

KMeansResult lloyd_run(const Matrix& points, const KMeansConfig& cfg, RandomSource rng) {
    const std::size_t n = points.rows();
    const std::size_t k = cfg.k;
    const std::size_t d = points.cols();

    Matrix centroids = kmeanspp_init(points, k, rng);
    std::vector<int> labels(n, 0);
    std::vector<std::size_t> counts(k, 0);

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        assign_nearest(points, centroids, labels);

        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) counts[static_cast<std::size_t>(labels[i])]++;

        // reseed each empty cluster to the farthest point from its centroid
        std::vector<bool> stolen(n, false);
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            double worst = -1.0;
            std::size_t pick = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (stolen[i]) continue;
                const std::size_t own = static_cast<std::size_t>(labels[i]);
                if (counts[own] <= 1) continue;
                const double d2 = sq_dist(points.row(i), centroids.row(own), d);
                if (d2 > worst) {
                    worst = d2;
                    pick = i;
                }
            }
            counts[static_cast<std::size_t>(labels[pick])]--;
            labels[pick] = static_cast<int>(c);
            counts[c] = 1;
            stolen[pick] = true;
        }

        Matrix next(k, d, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* p = points.row(i);
            double* cc = next.row(static_cast<std::size_t>(labels[i]));
            for (std::size_t col = 0; col < d; ++col) cc[col] += p[col];
        }
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            const double inv = 1.0 / static_cast<double>(counts[c]);
            double* cc = next.row(c);
            for (std::size_t col = 0; col < d; ++col) cc[col] *= inv;
            shift = std::max(shift, std::sqrt(sq_dist(cc, centroids.row(c), d)));
        }
        centroids = std::move(next);
        if (shift <= cfg.tol) break;
    }

    // final pass so labels are the nearest-centroid fixed point
    assign_nearest(points, centroids, labels);
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        inertia += sq_dist(points.row(i), centroids.row(static_cast<std::size_t>(labels[i])), d);
    }
    return {std::move(labels), std::move(centroids), inertia};
}

}  // namespace

KMeansResult kmeans(const Matrix& points, const KMeansConfig& cfg) {
    if (cfg.k < 2) throw std::invalid_argument("kmeans: k must be at least 2");
    if (cfg.k > points.rows()) throw std::invalid_argument("kmeans: k exceeds instance count");
    if (cfg.n_init < 1) throw std::invalid_argument("kmeans: n_init must be positive");
    if (!is_finite(points)) throw std::invalid_argument("kmeans: non-finite input");

    RandomSource root(cfg.seed);
    KMeansResult best;
    bool have = false;
    for (int r = 0; r < cfg.n_init; ++r) {
        KMeansResult run = lloyd_run(points, cfg, root.split(static_cast<std::uint64_t>(r)));
        if (!have || run.inertia < best.inertia) {
            best = std::move(run);
            have = true;
        }
    }
    return best;
}

SilhouetteReport silhouette(const Matrix& points, const std::vector<int>& labels,
                            const SilhouetteOptions& opts) {
    const std::size_t n = points.rows();
    if (labels.size() != n) throw std::invalid_argument("silhouette: label count mismatch");
    int max_label = -1;
    for (int l : labels) {
        if (l < 0) throw std::invalid_argument("silhouette: negative label");
        max_label = std::max(max_label, l);
    }
    const std::size_t k = static_cast<std::size_t>(max_label) + 1;

    SilhouetteReport report;
    std::vector<std::size_t> indices;
    if (n > opts.subsample_threshold) {
        // seeded uniform subsample; redraw if it degenerates to one cluster
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        RandomSource rng(opts.seed);
        for (std::uint64_t attempt = 0;; ++attempt) {
            if (attempt >= 16) {
                throw std::runtime_error("silhouette: subsample kept collapsing to one cluster");
            }
            std::vector<std::size_t> trial = all;
            RandomSource stream = rng.split(attempt);
            stream.shuffle(trial);
            trial.resize(opts.subsample_size);
            std::sort(trial.begin(), trial.end());
            std::vector<bool> present(k, false);
            std::size_t distinct = 0;
            for (std::size_t i : trial) {
                const std::size_t l = static_cast<std::size_t>(labels[i]);
                if (!present[l]) {
                    present[l] = true;
                    ++distinct;
                }
            }
            if (distinct >= 2) {
                indices = std::move(trial);
                break;
            }
        }
        report.subsample_indices = indices;
    } else {
        indices.resize(n);
        std::iota(indices.begin(), indices.end(), 0);
    }

    const std::size_t m = indices.size();
    Matrix sub(m, points.cols());
    std::vector<int> sub_labels(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::copy_n(points.row(indices[i]), points.cols(), sub.row(i));
        sub_labels[i] = labels[indices[i]];
    }

    std::vector<std::size_t> sizes(k, 0);
    for (int l : sub_labels) sizes[static_cast<std::size_t>(l)]++;
    std::size_t non_empty = 0;
    for (std::size_t s : sizes) non_empty += (s > 0);
    if (non_empty < 2) throw std::invalid_argument("silhouette: fewer than 2 clusters");

    const Matrix dist = pairwise_distances(sub);
    report.per_instance.assign(m, 0.0);
    const std::int64_t mm = static_cast<std::int64_t>(m);
    #pragma omp parallel for schedule(static)
    for (std::int64_t ii = 0; ii < mm; ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const std::size_t own = static_cast<std::size_t>(sub_labels[i]);
        if (sizes[own] <= 1) {
            report.per_instance[i] = 0.0;
            continue;
        }
        std::vector<double> sum(k, 0.0);
        const double* di = dist.row(i);
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            sum[static_cast<std::size_t>(sub_labels[j])] += di[j];
        }
        const double a = sum[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c == own || sizes[c] == 0) continue;
            b = std::min(b, sum[c] / static_cast<double>(sizes[c]));
        }
        const double denom = std::max(a, b);
        report.per_instance[i] = (denom == 0.0) ? 0.0 : (b - a) / denom;
    }
    double total = 0.0;
    for (double v : report.per_instance) total += v;
    report.mean = total / static_cast<double>(m);
    return report;
}

std::size_t select_best_view(const std::vector<double>& si_means) {
    if (si_means.empty()) throw std::invalid_argument("select_best_view: empty score list");
    std::size_t best = 0;
    for (std::size_t v = 1; v < si_means.size(); ++v) {
        if (si_means[v] > si_means[best]) best = v;
    }
    return best;
}

}  // namespace dwcl
