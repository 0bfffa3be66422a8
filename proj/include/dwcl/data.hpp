#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dwcl/matrix.hpp"
#include "dwcl/rng.hpp"

namespace dwcl {

/// V per-view feature matrices over the same N instances.
struct MultiViewDataset {
    std::string name;
    std::vector<Matrix> views;            // each n x d_v
    std::vector<std::string> view_names;  // same length as views
    std::vector<int> labels;              // empty when unlabeled, else length n in [0, k)
    std::size_t k = 0;                    // class count

    std::size_t n_views() const { return views.size(); }
    std::size_t n() const { return views.empty() ? 0 : views.front().rows(); }
    bool has_labels() const { return !labels.empty(); }
};

struct SyntheticViewSpec {
    std::size_t dim = 0;
    double noise_sigma = 0.0;
    bool informative = true;
};

struct SyntheticSpec {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t latent_dim = 0;
    std::vector<SyntheticViewSpec> views;
    double cluster_separation = 4.0;  // minimum distance between latent cluster means
    std::uint64_t seed = 0;
};

/// Gaussian latent clusters pushed through per-view random orthonormal maps
/// plus isotropic noise; a non-informative view is drawn independently of
/// the latent, so its standalone clustering sits at chance.
MultiViewDataset generate_synthetic(const SyntheticSpec& spec);

enum class Normalization { MinMax, ZScore, None };

/// Per-feature, per-view transform. MinMax maps each feature to [0, 1]
/// (constant features map to 0); ZScore centers and scales to unit variance.
MultiViewDataset normalize(MultiViewDataset dataset, Normalization method);

/// Seeded shuffle split into blocks of batch_size; a final partial block is
/// kept only when it has at least 2 instances.
std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n, std::size_t batch_size,
                                                    RandomSource& rng);

/// Directory layout: manifest.json plus one headerless CSV per view and an
/// optional labels file. Round-trips bit-exactly for finite inputs.
void save_dataset(const MultiViewDataset& dataset, const std::string& dir);
MultiViewDataset load_dataset(const std::string& dir);

/// Rows of `view` restricted to `idx`, in order.
Matrix gather_rows(const Matrix& view, const std::vector<std::size_t>& idx);

}  // namespace dwcl
