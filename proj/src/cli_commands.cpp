#include "dwcl/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "dwcl/eval.hpp"
#include "dwcl/trainer.hpp"

namespace fs = std::filesystem;

namespace dwcl {

void cmd_synth(const SyntheticSpec& spec, const std::string& out_dir) {
    const MultiViewDataset ds = generate_synthetic(spec);
    save_dataset(ds, out_dir);
}

RunReport run_single(const RunConfig& cfg) {
    const MultiViewDataset ds = load_run_dataset(cfg);
    RunOptions opts;
    opts.out_dir = cfg.out_dir;
    opts.mode = cfg.mode;
    opts.config_snapshot = run_config_to_json(cfg).dump();
    return run_training(ds, cfg.train, opts);
}

namespace {

RunConfig with_seed_offset(const RunConfig& base, int r) {
    RunConfig cfg = base;
    cfg.train.seed = base.train.seed + static_cast<std::uint64_t>(r);
    if (cfg.synthetic) cfg.synthetic->seed = base.synthetic->seed + static_cast<std::uint64_t>(r);
    return cfg;
}

struct MeanStd {
    double mean = 0.0, sd = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - out.mean) * (x - out.mean);
    out.sd = std::sqrt(var / static_cast<double>(xs.size()));
    return out;
}

}  // namespace

void cmd_train(const RunConfig& cfg) {
    if (cfg.repeats == 1) {
        const RunReport report = run_single(cfg);
        if (report.has_metrics) {
            std::printf("acc %.4f nmi %.4f\n", report.acc, report.nmi);
        }
        return;
    }
    std::vector<double> accs, nmis;
    for (int r = 0; r < cfg.repeats; ++r) {
        RunConfig run_cfg = with_seed_offset(cfg, r);
        if (!cfg.out_dir.empty()) {
            run_cfg.out_dir =
                (fs::path(cfg.out_dir) / ("seed_" + std::to_string(run_cfg.train.seed))).string();
        }
        const RunReport report = run_single(run_cfg);
        if (report.has_metrics) {
            accs.push_back(report.acc);
            nmis.push_back(report.nmi);
        }
    }
    const MeanStd acc = mean_std(accs), nm = mean_std(nmis);
    std::printf("runs %d acc %.4f+-%.4f nmi %.4f+-%.4f\n", cfg.repeats, acc.mean, acc.sd,
                nm.mean, nm.sd);
    if (!cfg.out_dir.empty() && !accs.empty()) {
        std::ofstream os(fs::path(cfg.out_dir) / "summary.csv");
        os << "runs,acc_mean,acc_std,nmi_mean,nmi_std\n";
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f,%.6f,%.6f\n", accs.size(), acc.mean,
                      acc.sd, nm.mean, nm.sd);
        os << buf;
    }
}

std::vector<ArmSummary> run_ablation_grid(const GridConfig& grid, int jobs,
                                          const ArmRunner& runner) {
    struct Arm {
        Mechanism mechanism;
        WeightMode weight_mode;
    };
    std::vector<Arm> arms;
    for (Mechanism m : grid.mechanisms) {
        for (WeightMode w : grid.weight_modes) arms.push_back({m, w});
    }
    std::vector<ArmSummary> results(arms.size());

    auto run_arm = [&](std::size_t idx) {
        ArmSummary& out = results[idx];
        out.mechanism = arms[idx].mechanism;
        out.weight_mode = arms[idx].weight_mode;
        std::vector<double> accs, nmis;
        try {
            for (int r = 0; r < grid.repeats; ++r) {
                RunConfig cfg = with_seed_offset(grid.base, r);
                cfg.repeats = 1;
                cfg.train.mechanism = arms[idx].mechanism;
                cfg.train.weight_mode = arms[idx].weight_mode;
                if (!grid.base.out_dir.empty()) {
                    cfg.out_dir = (fs::path(grid.base.out_dir) /
                                   (to_string(arms[idx].mechanism) + "_" +
                                    to_string(arms[idx].weight_mode)) /
                                   ("seed_" + std::to_string(cfg.train.seed)))
                                      .string();
                }
                const RunReport report = runner(cfg);
                out.runs++;
                if (report.has_metrics) {
                    accs.push_back(report.acc);
                    nmis.push_back(report.nmi);
                }
            }
        } catch (const std::exception& e) {
            out.failed = true;
            out.error = e.what();
        }
        const MeanStd acc = mean_std(accs), nm = mean_std(nmis);
        out.acc_mean = acc.mean;
        out.acc_std = acc.sd;
        out.nmi_mean = nm.mean;
        out.nmi_std = nm.sd;
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < arms.size(); ++i) run_arm(i);
    } else {
        std::vector<std::thread> workers;
        std::size_t next = 0;
        for (int j = 0; j < jobs && next < arms.size(); ++j, ++next) {
            // static round-robin keeps arm ordering independent of scheduling
            workers.emplace_back([&run_arm, &arms, start = next, jobs] {
                for (std::size_t i = start; i < arms.size(); i += static_cast<std::size_t>(jobs)) {
                    run_arm(i);
                }
            });
        }
        for (auto& w : workers) w.join();
    }
    return results;
}

void write_summary_csv(const std::vector<ArmSummary>& arms, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_summary_csv: cannot open " + path);
    os << "mechanism,weight_mode,runs,status,acc_mean,acc_std,nmi_mean,nmi_std\n";
    char buf[240];
    for (const auto& arm : arms) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%d,%s,%.6f,%.6f,%.6f,%.6f\n",
                      to_string(arm.mechanism).c_str(), to_string(arm.weight_mode).c_str(),
                      arm.runs, arm.failed ? "failed" : "ok", arm.acc_mean, arm.acc_std,
                      arm.nmi_mean, arm.nmi_std);
        os << buf;
    }
    if (!os) throw std::runtime_error("write_summary_csv: write failed for " + path);
}

void cmd_ablate(const GridConfig& grid, int jobs) {
    const std::vector<ArmSummary> arms =
        run_ablation_grid(grid, jobs, [](const RunConfig& cfg) { return run_single(cfg); });
    for (const auto& arm : arms) {
        if (arm.failed) {
            std::printf("%s/%s failed: %s\n", to_string(arm.mechanism).c_str(),
                        to_string(arm.weight_mode).c_str(), arm.error.c_str());
        } else {
            std::printf("%s/%s acc %.4f+-%.4f nmi %.4f+-%.4f\n",
                        to_string(arm.mechanism).c_str(), to_string(arm.weight_mode).c_str(),
                        arm.acc_mean, arm.acc_std, arm.nmi_mean, arm.nmi_std);
        }
    }
    if (!grid.base.out_dir.empty()) {
        fs::create_directories(grid.base.out_dir);
        write_summary_csv(arms, (fs::path(grid.base.out_dir) / "summary.csv").string());
    }
}

BenchResult cmd_bench(const std::vector<std::size_t>& view_counts, std::size_t batch,
                      std::size_t dim, int repeats, std::uint64_t seed,
                      const std::string& out_csv) {
    const BenchResult result =
        run_contrastive_scaling_bench(view_counts, batch, dim, repeats, seed);
    std::printf("views  bo_pairs  bo_seconds  pw_pairs  pw_seconds\n");
    for (const auto& p : result.points) {
        std::printf("%5zu  %8zu  %10.6f  %8zu  %10.6f\n", p.n_views, p.pairs_bestother,
                    p.seconds_bestother, p.pairs_pairwise, p.seconds_pairwise);
    }
    std::printf("fitted exponent bestother %.3f pairwise %.3f\n", result.exponent_bestother,
                result.exponent_pairwise);
    if (!out_csv.empty()) write_bench_csv(result, out_csv);
    return result;
}

RunReport cmd_eval(const std::string& checkpoint_path, const std::string& data_dir,
                   const std::string& out_dir) {
    std::string config_json;
    std::vector<ViewModel> models = load_view_models(checkpoint_path, &config_json);
    TrainConfig cfg;
    std::string mode = "dwcl";
    if (!config_json.empty()) {
        const nlohmann::json j = nlohmann::json::parse(config_json);
        // checkpoints written by the trainer store the full run config
        if (j.contains("train")) {
            cfg = train_config_from_json(j["train"]);
            mode = j.value("mode", mode);
        } else {
            cfg = train_config_from_json(j);
        }
    }
    const MultiViewDataset raw = load_dataset(data_dir);
    if (raw.n_views() != models.size()) {
        throw std::runtime_error("cmd_eval: checkpoint has " + std::to_string(models.size()) +
                                 " views but dataset has " + std::to_string(raw.n_views()));
    }
    const MultiViewDataset ds = normalize(raw, cfg.normalization);

    TrainState state;
    state.models = std::move(models);
    RunReport report;
    report.mode = mode;
    report.config = config_json.empty() ? nlohmann::json::object()
                                        : nlohmann::json::parse(config_json);
    report.predicted_labels = final_cluster(state, ds, cfg);
    if (ds.has_labels()) {
        report.has_metrics = true;
        report.acc = accuracy(report.predicted_labels, ds.labels, ds.k);
        report.nmi = nmi(report.predicted_labels, ds.labels);
    }
    if (report.has_metrics) {
        std::printf("acc %.4f nmi %.4f\n", report.acc, report.nmi);
    } else {
        std::printf("dataset has no labels; wrote predictions only\n");
    }
    if (!out_dir.empty()) emit_report(report, out_dir);
    return report;
}

}  // namespace dwcl
