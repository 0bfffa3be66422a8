#pragma once

#include <cstdint>
#include <vector>

#include "dwcl/matrix.hpp"

namespace dwcl {

struct KMeansConfig {
    std::size_t k = 2;
    int n_init = 10;
    int max_iters = 300;
    double tol = 1e-6;  // max centroid shift below which iteration stops
    std::uint64_t seed = 0;
};

struct KMeansResult {
    std::vector<int> labels;  // in [0, k)
    Matrix centroids;         // k x d
    double inertia = 0.0;     // sum of squared distances to assigned centroid
};

/// Best-inertia result over n_init k-means++ restarts. Assignments are a
/// fixed point: every instance is assigned to its nearest centroid, ties
/// broken by lowest cluster index. An empty cluster during iteration is
/// repaired by reseeding its centroid to the farthest point.
KMeansResult kmeans(const Matrix& points, const KMeansConfig& cfg);

struct SilhouetteOptions {
    std::size_t subsample_threshold = 4096;  // compute on a subsample above this N
    std::size_t subsample_size = 2048;
    std::uint64_t seed = 0;
};

struct SilhouetteReport {
    std::vector<double> per_instance;          // one value per scored instance
    double mean = 0.0;
    std::vector<std::size_t> subsample_indices;  // empty when the full data was used
};

/// Per-instance silhouette values: a = mean intra-cluster distance excluding
/// self, b = minimum over other clusters of the mean distance, SI = (b-a) /
/// max(a,b). Singleton-cluster instances and a = b = 0 score 0.
SilhouetteReport silhouette(const Matrix& points, const std::vector<int>& labels,
                            const SilhouetteOptions& opts = {});

/// Index of the highest mean silhouette; ties go to the lowest index.
std::size_t select_best_view(const std::vector<double>& si_means);

}  // namespace dwcl
