#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dwcl {

struct BenchPoint {
    std::size_t n_views = 0;
    std::size_t pairs_bestother = 0;
    std::size_t pairs_pairwise = 0;
    double seconds_bestother = 0.0;
    double seconds_pairwise = 0.0;
};

struct BenchResult {
    std::vector<BenchPoint> points;
    double exponent_bestother = 0.0;  // log-log slope of time vs view count
    double exponent_pairwise = 0.0;
    std::size_t batch = 0;
    std::size_t dim = 0;
    int repeats = 0;
};

/// Measures the wall time of one epoch's worth of contrastive-loss
/// evaluations (loss + gradients per plan pair) under both mechanisms at each
/// view count, then fits growth exponents by log-log regression.
BenchResult run_contrastive_scaling_bench(const std::vector<std::size_t>& view_counts,
                                          std::size_t batch, std::size_t dim, int repeats,
                                          std::uint64_t seed,
                                          std::size_t batches_per_epoch = 4);

void write_bench_csv(const BenchResult& result, const std::string& path);

/// Least-squares slope of ln(y) against ln(x).
double fit_log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dwcl
