#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dwcl/bench.hpp"
#include "dwcl/config.hpp"
#include "dwcl/report.hpp"

namespace dwcl {

/// Generates a synthetic dataset and saves it under out_dir.
void cmd_synth(const SyntheticSpec& spec, const std::string& out_dir);

/// One seeded run of the configured pipeline; writes report files when the
/// config names an output directory.
RunReport run_single(const RunConfig& cfg);

/// Full train command. repeats > 1 fans out over consecutive seeds into
/// per-seed subdirectories and writes an aggregate summary.csv.
void cmd_train(const RunConfig& cfg);

struct ArmSummary {
    Mechanism mechanism = Mechanism::BestOther;
    WeightMode weight_mode = WeightMode::Dual;
    int runs = 0;
    bool failed = false;
    std::string error;
    double acc_mean = 0.0, acc_std = 0.0;
    double nmi_mean = 0.0, nmi_std = 0.0;
};

using ArmRunner = std::function<RunReport(const RunConfig&)>;

/// Runs every mechanism x weight-mode arm over the grid's repeat seeds.
/// A failing arm is marked failed without stopping the others. jobs > 1 runs
/// arms in parallel threads; results are ordered by arm regardless.
std::vector<ArmSummary> run_ablation_grid(const GridConfig& grid, int jobs,
                                          const ArmRunner& runner);

void write_summary_csv(const std::vector<ArmSummary>& arms, const std::string& path);

/// Ablation command: grid runs + summary.csv in the output directory.
void cmd_ablate(const GridConfig& grid, int jobs);

/// Contrastive-loss scaling benchmark; prints the table and writes a CSV
/// when out_csv is nonempty.
BenchResult cmd_bench(const std::vector<std::size_t>& view_counts, std::size_t batch,
                      std::size_t dim, int repeats, std::uint64_t seed,
                      const std::string& out_csv);

/// Recomputes clustering metrics from a checkpoint plus a dataset directory.
RunReport cmd_eval(const std::string& checkpoint_path, const std::string& data_dir,
                   const std::string& out_dir);

}  // namespace dwcl
