#pragma once

#include <vector>

#include "dwcl/matrix.hpp"
#include "dwcl/weights.hpp"

namespace dwcl {

struct LossConfig {
    double gamma = 1.0;        // contrastive weight
    double lambda = 1.0;       // reconstruction weight
    double temperature = 0.5;  // InfoNCE temperature
};

struct InfoNceResult {
    double loss = 0.0;
    Matrix grad_a;
    Matrix grad_b;
};

/// Two-direction InfoNCE over cosine similarities with positives (i, i).
/// Per anchor, negatives are the other in-batch rows of its own view plus
/// every row of the other view; the positive stays in the denominator.
/// Returns exact gradients with respect to both inputs.
InfoNceResult info_nce(const Matrix& hhat_a, const Matrix& hhat_b, double tau);

struct ReconResult {
    double loss = 0.0;
    Matrix grad;  // d loss / d xrec
};

/// Mean squared reconstruction error (1/b) sum_i ||x_i - xrec_i||^2.
ReconResult reconstruction_loss(const Matrix& x, const Matrix& xrec);

struct LossBreakdown {
    double total = 0.0;
    std::vector<double> weighted_contrastive;  // per pair, weight applied
    std::vector<double> reconstruction;        // per view
    double contrastive_sum = 0.0;              // sum of weighted pair terms
    double reconstruction_sum = 0.0;
};

/// total = gamma * sum_pairs w * L_pair + lambda * sum_views L_rec, with the
/// per-pair weight selected from the plan by the ablation mask.
LossBreakdown assemble_total(const CrossViewPlan& plan, WeightMode mode,
                             const std::vector<double>& per_pair_losses,
                             const std::vector<double>& per_view_rec_losses,
                             const LossConfig& cfg);

/// One training-log line; iteration 0 is pretraining.
struct LossLogRow {
    int iteration = 0;
    int epoch = 0;
    int batch = 0;
    double total = 0.0;
    double contrastive = 0.0;    // gamma-weighted contrastive part
    double reconstruction = 0.0; // lambda-weighted reconstruction part
};

}  // namespace dwcl
