#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dwcl/cluster.hpp"
#include "dwcl/data.hpp"
#include "dwcl/loss.hpp"
#include "dwcl/net.hpp"
#include "dwcl/report.hpp"
#include "dwcl/weights.hpp"

namespace dwcl {

struct TrainConfig {
    std::size_t batch_size = 128;
    int pretrain_epochs = 100;
    int cl_iterations = 3;      // I
    int cl_epochs = 50;         // T, epochs per iteration
    std::uint64_t seed = 0;
    Mechanism mechanism = Mechanism::BestOther;
    WeightMode weight_mode = WeightMode::Dual;
    LossConfig loss;
    AdamConfig adam;
    int kmeans_restarts = 10;
    int kmeans_max_iters = 300;
    double kmeans_tol = 1e-6;
    std::size_t h_dim = 512;
    std::size_t hhat_dim = 128;
    std::vector<std::size_t> encoder_hidden = {500, 500, 2000};
    Normalization normalization = Normalization::MinMax;
};

struct TrainState {
    std::vector<ViewModel> models;
    ViewDiagnostics diagnostics;              // most recent completed iteration
    CrossViewPlan plan;
    std::vector<ViewDiagnostics> timeline;    // iteration 0 = initialization
    std::vector<LossLogRow> loss_log;
    RandomSource rng{0};
    int completed_iterations = 0;
};

/// Reconstruction-only training of every view's autoencoder; projections are
/// initialized but untouched by the loss.
TrainState pretrain(const MultiViewDataset& dataset, const TrainConfig& cfg);

/// k-means + silhouette per view on the low-level features H, best view,
/// quality and discrepancy weights, and the initial cross-view plan.
void initialize_diagnostics(TrainState& state, const MultiViewDataset& dataset,
                            const TrainConfig& cfg);

using IterationCallback = std::function<void(const TrainState&, int iteration)>;

/// Alternating fine-tuning: per iteration, cl_epochs epochs of the weighted
/// total loss over shuffled batches, then labels, best view, weights and the
/// plan are recomputed on the projected features. Plan weights stay constant
/// within an iteration.
void finetune(TrainState& state, const MultiViewDataset& dataset, const TrainConfig& cfg,
              const IterationCallback& on_iteration = {});

/// k-means on the concatenation of the chosen views' projected features.
std::vector<int> cluster_on_views(const TrainState& state, const MultiViewDataset& dataset,
                                  const TrainConfig& cfg,
                                  const std::vector<std::size_t>& view_subset);

/// Final clustering over all views (the concatenated representation).
std::vector<int> final_cluster(const TrainState& state, const MultiViewDataset& dataset,
                               const TrainConfig& cfg);

/// The batch-shuffle stream used for a given global epoch index (pretraining
/// epochs first, then fine-tuning epochs in order).
RandomSource trainer_epoch_rng(std::uint64_t seed, int global_epoch);

/// Full-dataset features of one view, computed in chunks.
Matrix full_h(const ViewModel& model, const Matrix& view);
Matrix full_hhat(const ViewModel& model, const Matrix& view);

struct RunOptions {
    std::string out_dir;         // empty = no files written
    std::string mode = "dwcl";   // "dwcl" or "bsv"
    bool write_checkpoints = true;
    std::string config_snapshot; // JSON string embedded in checkpoints/report
};

/// Normalize, pretrain, initialize, fine-tune (unless bsv), cluster, score.
/// Phase failures are rethrown with a [phase=...] tag.
RunReport run_training(const MultiViewDataset& dataset, const TrainConfig& cfg,
                       const RunOptions& opts);

}  // namespace dwcl
