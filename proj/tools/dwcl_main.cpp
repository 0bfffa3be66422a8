#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dwcl/cli.hpp"

namespace {

// flag > config file > default
void apply_overrides(dwcl::RunConfig& cfg, const CLI::Option* seed_opt, std::uint64_t seed,
                     const CLI::Option* out_opt, const std::string& out,
                     const CLI::Option* mech_opt, const std::string& mechanism,
                     const CLI::Option* weights_opt, const std::string& weights,
                     const CLI::Option* repeats_opt, int repeats) {
    if (seed_opt->count()) cfg.train.seed = seed;
    if (out_opt->count()) cfg.out_dir = out;
    if (mech_opt->count()) cfg.train.mechanism = dwcl::mechanism_from_string(mechanism);
    if (weights_opt->count()) cfg.train.weight_mode = dwcl::weight_mode_from_string(weights);
    if (repeats_opt->count()) cfg.repeats = repeats;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual-weighted multi-view contrastive clustering"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic multi-view dataset");
    std::string synth_spec, synth_out;
    std::uint64_t synth_seed = 0;
    synth->add_option("--spec", synth_spec, "synthetic spec JSON file")->required();
    synth->add_option("--out", synth_out, "output dataset directory")->required();
    auto* synth_seed_opt = synth->add_option("--seed", synth_seed, "override spec seed");

    // train
    auto* train = app.add_subcommand("train", "run the training pipeline");
    std::string train_config, train_out, train_mech, train_weights;
    std::uint64_t train_seed = 0;
    int train_repeats = 1;
    train->add_option("--config", train_config, "run config JSON file")->required();
    auto* train_seed_opt = train->add_option("--seed", train_seed, "seed override");
    auto* train_out_opt = train->add_option("--out", train_out, "output directory override");
    auto* train_mech_opt =
        train->add_option("--mechanism", train_mech, "bestother or pairwise");
    auto* train_weights_opt =
        train->add_option("--weights", train_weights, "none, cmi, si or dual");
    auto* train_repeats_opt = train->add_option("--repeats", train_repeats, "seeded repeats");

    // ablate
    auto* ablate = app.add_subcommand("ablate", "run a mechanism x weight-mode grid");
    std::string ablate_config, ablate_out;
    std::uint64_t ablate_seed = 0;
    int ablate_repeats = 0, ablate_jobs = 1;
    ablate->add_option("--config", ablate_config, "grid config JSON file")->required();
    auto* ablate_seed_opt = ablate->add_option("--seed", ablate_seed, "seed override");
    auto* ablate_out_opt = ablate->add_option("--out", ablate_out, "output directory override");
    auto* ablate_repeats_opt =
        ablate->add_option("--repeats", ablate_repeats, "repeats per arm");
    ablate->add_option("--jobs", ablate_jobs, "parallel arm workers");

    // bench
    auto* bench = app.add_subcommand("bench", "contrastive-loss scaling benchmark");
    std::vector<std::size_t> bench_views = {4, 6, 8, 12, 16};
    std::size_t bench_batch = 128, bench_dim = 64;
    int bench_repeats = 3;
    std::uint64_t bench_seed = 0;
    std::string bench_out;
    bench->add_option("--views", bench_views, "view counts to measure");
    bench->add_option("--batch", bench_batch, "batch size");
    bench->add_option("--dim", bench_dim, "feature dimension");
    bench->add_option("--repeats", bench_repeats, "timing repeats (min taken)");
    bench->add_option("--seed", bench_seed, "data seed");
    bench->add_option("--out", bench_out, "CSV output path");

    // eval
    auto* eval = app.add_subcommand("eval", "recompute metrics from a checkpoint");
    std::string eval_ckpt, eval_data, eval_out;
    eval->add_option("--checkpoint", eval_ckpt, "model checkpoint file")->required();
    eval->add_option("--data", eval_data, "dataset directory")->required();
    eval->add_option("--out", eval_out, "optional report directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            dwcl::SyntheticSpec spec =
                dwcl::synthetic_spec_from_json(dwcl::load_json_file(synth_spec));
            if (synth_seed_opt->count()) spec.seed = synth_seed;
            dwcl::cmd_synth(spec, synth_out);
        } else if (train->parsed()) {
            dwcl::RunConfig cfg =
                dwcl::run_config_from_json(dwcl::load_json_file(train_config));
            apply_overrides(cfg, train_seed_opt, train_seed, train_out_opt, train_out,
                            train_mech_opt, train_mech, train_weights_opt, train_weights,
                            train_repeats_opt, train_repeats);
            dwcl::cmd_train(cfg);
        } else if (ablate->parsed()) {
            dwcl::GridConfig grid =
                dwcl::grid_config_from_json(dwcl::load_json_file(ablate_config));
            if (ablate_seed_opt->count()) grid.base.train.seed = ablate_seed;
            if (ablate_out_opt->count()) grid.base.out_dir = ablate_out;
            if (ablate_repeats_opt->count()) grid.repeats = ablate_repeats;
            dwcl::cmd_ablate(grid, ablate_jobs);
        } else if (bench->parsed()) {
            dwcl::cmd_bench(bench_views, bench_batch, bench_dim, bench_repeats, bench_seed,
                            bench_out);
        } else if (eval->parsed()) {
            dwcl::cmd_eval(eval_ckpt, eval_data, eval_out);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
