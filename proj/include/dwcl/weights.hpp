#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace dwcl {

enum class Mechanism { BestOther, Pairwise };
enum class WeightMode { None, CmiOnly, SiOnly, Dual };

/// One cross-view pair with every weight attached to it.
struct PairWeight {
    std::size_t view_a = 0;
    std::size_t view_b = 0;
    double w_si = 1.0;    // product of the two view quality weights
    double cmi = 0.0;     // normalized mutual information of the two labelings
    double w_cmi = 0.0;   // e^cmi - 1
    double w_dual = 0.0;  // w_cmi * w_si
};

/// The set of (view, view) pairs entering the contrastive loss.
struct CrossViewPlan {
    Mechanism mechanism = Mechanism::BestOther;
    std::vector<PairWeight> pairs;
    std::optional<std::size_t> best_view;  // set under BestOther
};

/// Per-iteration weighting snapshot.
struct ViewDiagnostics {
    int iteration = 0;
    std::vector<double> si_means;   // per view
    std::vector<double> w_si_view;  // e^si per view
    std::size_t best_view = 0;
    std::vector<PairWeight> pairs;
};

/// View quality weight e^si.
double view_quality_weight(double si_mean);

/// Product of the two view quality weights, e^(si_v + si_b).
double cross_view_quality_weight(double si_v, double si_b);

/// Arithmetic-mean-normalized mutual information of two labelings over [0, k)
/// with natural logs. Both marginal entropies zero defines CMI = 1; exactly
/// one zero defines CMI = 0.
double normalized_mi(const std::vector<int>& labels_a, const std::vector<int>& labels_b,
                     std::size_t ka, std::size_t kb);

struct CmiWeight {
    double cmi = 0.0;
    double weight = 0.0;  // e^cmi - 1, in [0, e-1]
};

CmiWeight cmi_weight(const std::vector<int>& labels_v, const std::vector<int>& labels_b,
                     std::size_t k);

/// BestOther: pairs (v, B) for every v != B, count V-1. Pairwise: all
/// unordered distinct pairs, count V(V-1)/2. Each pair carries its quality,
/// discrepancy and dual weights computed from the supplied silhouettes and
/// full-dataset k-means labelings.
CrossViewPlan build_plan(Mechanism mechanism, std::size_t n_views,
                         std::optional<std::size_t> best_view,
                         const std::vector<double>& si_means,
                         const std::vector<std::vector<int>>& per_view_labels,
                         std::size_t k);

/// The weight a pair contributes to the loss under the given ablation mask.
double effective_weight(const PairWeight& pair, WeightMode mode);

}  // namespace dwcl
