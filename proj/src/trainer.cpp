#include "dwcl/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "dwcl/config.hpp"
#include "dwcl/eval.hpp"

namespace fs = std::filesystem;

namespace dwcl {

namespace {

// stream ids for seed derivation; every consumer gets its own lane
constexpr std::uint64_t kStreamModelInit = 0x10000;
constexpr std::uint64_t kStreamEpoch = 0x20000;
constexpr std::uint64_t kStreamKmeans = 0x30000;
constexpr std::uint64_t kStreamSilhouette = 0x40000;
constexpr std::uint64_t kStreamFinalKmeans = 0x50000;
constexpr std::uint64_t kStreamViewMetrics = 0x60000;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void validate_dataset(const MultiViewDataset& ds, const TrainConfig& cfg) {
    if (ds.views.empty()) throw std::invalid_argument("dataset has no views");
    const std::size_t n = ds.n();
    for (const auto& view : ds.views) {
        if (view.rows() != n) throw std::invalid_argument("views disagree on instance count");
    }
    if (ds.k < 2) throw std::invalid_argument("dataset class count k must be at least 2");
    if (n < ds.k) throw std::invalid_argument("fewer instances than clusters");
    if (cfg.batch_size < 2) throw std::invalid_argument("batch size must be at least 2");
}

KMeansConfig kmeans_config(const TrainConfig& cfg, std::size_t k, std::uint64_t stream) {
    KMeansConfig kc;
    kc.k = k;
    kc.n_init = cfg.kmeans_restarts;
    kc.max_iters = cfg.kmeans_max_iters;
    kc.tol = cfg.kmeans_tol;
    kc.seed = RandomSource(cfg.seed).split(stream).seed();
    return kc;
}

Matrix full_features(const ViewModel& model, const Matrix& view, bool projected) {
    const std::size_t chunk = 1024;
    const std::size_t out_dim = projected ? model.hhat_dim() : model.h_dim();
    Matrix out(view.rows(), out_dim);
    std::vector<std::size_t> idx;
    for (std::size_t start = 0; start < view.rows(); start += chunk) {
        const std::size_t end = std::min(view.rows(), start + chunk);
        idx.resize(end - start);
        for (std::size_t i = start; i < end; ++i) idx[i - start] = i;
        const Matrix x = gather_rows(view, idx);
        const ViewForward fwd = view_forward(model, x, nullptr, projected, false);
        const Matrix& feat = projected ? fwd.hhat : fwd.h;
        for (std::size_t i = 0; i < feat.rows(); ++i) {
            std::copy_n(feat.row(i), out_dim, out.row(start + i));
        }
    }
    return out;
}

// One epoch of batched gradient steps. Contrastive terms follow the current
// plan; with contrastive off this is reconstruction-only pretraining.
void train_epoch(TrainState& state, const MultiViewDataset& ds, const TrainConfig& cfg,
                 bool contrastive, int iteration, int epoch, int global_epoch) {
    RandomSource rng = trainer_epoch_rng(cfg.seed, global_epoch);
    const auto blocks = epoch_batches(ds.n(), cfg.batch_size, rng);
    if (blocks.empty()) {
        throw std::runtime_error("no trainable batch (dataset smaller than 2 instances?)");
    }
    const std::size_t n_views = ds.n_views();
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const auto& block = blocks[bi];
        std::vector<ViewTape> tapes(n_views);
        std::vector<ViewForward> fwd(n_views);
        std::vector<double> rec_losses(n_views);
        std::vector<Matrix> grad_xrec(n_views);
        for (std::size_t v = 0; v < n_views; ++v) {
            const Matrix x = gather_rows(ds.views[v], block);
            fwd[v] = view_forward(state.models[v], x, &tapes[v], contrastive, true);
            ReconResult rec = reconstruction_loss(x, fwd[v].xrec);
            rec_losses[v] = rec.loss;
            grad_xrec[v] = std::move(rec.grad);
            for (std::size_t i = 0; i < grad_xrec[v].size(); ++i) {
                grad_xrec[v].data()[i] *= cfg.loss.lambda;
            }
        }

        std::vector<double> pair_losses;
        std::vector<Matrix> grad_hhat(n_views);
        if (contrastive) {
            for (std::size_t v = 0; v < n_views; ++v) {
                grad_hhat[v] = Matrix(block.size(), state.models[v].hhat_dim(), 0.0);
            }
            for (const PairWeight& pair : state.plan.pairs) {
                const InfoNceResult res =
                    info_nce(fwd[pair.view_a].hhat, fwd[pair.view_b].hhat, cfg.loss.temperature);
                pair_losses.push_back(res.loss);
                const double w = cfg.loss.gamma * effective_weight(pair, cfg.weight_mode);
                Matrix& ga = grad_hhat[pair.view_a];
                Matrix& gb = grad_hhat[pair.view_b];
                for (std::size_t i = 0; i < ga.size(); ++i) {
                    ga.data()[i] += w * res.grad_a.data()[i];
                }
                for (std::size_t i = 0; i < gb.size(); ++i) {
                    gb.data()[i] += w * res.grad_b.data()[i];
                }
            }
        }

        static const CrossViewPlan empty_plan;
        const CrossViewPlan& plan = contrastive ? state.plan : empty_plan;
        const LossBreakdown breakdown =
            assemble_total(plan, cfg.weight_mode, pair_losses, rec_losses, cfg.loss);
        if (!std::isfinite(breakdown.total)) {
            char msg[160];
            std::snprintf(msg, sizeof(msg),
                          "loss diverged (iteration %d epoch %d batch %zu)", iteration, epoch, bi);
            throw std::runtime_error(msg);
        }
        state.loss_log.push_back({iteration, epoch, static_cast<int>(bi), breakdown.total,
                                  cfg.loss.gamma * breakdown.contrastive_sum,
                                  cfg.loss.lambda * breakdown.reconstruction_sum});

        for (std::size_t v = 0; v < n_views; ++v) {
            const ViewGrads grads =
                view_backward(state.models[v], tapes[v],
                              contrastive ? &grad_hhat[v] : nullptr, &grad_xrec[v]);
            adam_step(state.models[v], grads, cfg.adam);
        }
    }
}

// Shared per-iteration weighting pass: one k-means per view feeds labels,
// silhouettes, the best view and both weight families.
void update_diagnostics(TrainState& state, const MultiViewDataset& ds, const TrainConfig& cfg,
                        int iteration, bool use_low_level) {
    const std::size_t n_views = ds.n_views();
    std::vector<std::vector<int>> labels(n_views);
    std::vector<double> si(n_views);
    for (std::size_t v = 0; v < n_views; ++v) {
        const Matrix feats = full_features(state.models[v], ds.views[v], !use_low_level);
        const std::uint64_t lane = static_cast<std::uint64_t>(iteration) * 1024 + v;
        const KMeansResult km = kmeans(feats, kmeans_config(cfg, ds.k, kStreamKmeans + lane));
        labels[v] = km.labels;
        SilhouetteOptions opts;
        opts.seed = RandomSource(cfg.seed).split(kStreamSilhouette + lane).seed();
        si[v] = silhouette(feats, km.labels, opts).mean;
    }
    const std::size_t best = select_best_view(si);
    state.plan = build_plan(cfg.mechanism, n_views,
                            cfg.mechanism == Mechanism::BestOther
                                ? std::optional<std::size_t>(best)
                                : std::nullopt,
                            si, labels, ds.k);

    ViewDiagnostics diag;
    diag.iteration = iteration;
    diag.si_means = si;
    for (double s : si) diag.w_si_view.push_back(view_quality_weight(s));
    diag.best_view = best;
    diag.pairs = state.plan.pairs;
    state.diagnostics = diag;
    state.timeline.push_back(std::move(diag));
}

}  // namespace

RandomSource trainer_epoch_rng(std::uint64_t seed, int global_epoch) {
    return RandomSource(seed).split(kStreamEpoch + static_cast<std::uint64_t>(global_epoch));
}

Matrix full_h(const ViewModel& model, const Matrix& view) {
    return full_features(model, view, false);
}

Matrix full_hhat(const ViewModel& model, const Matrix& view) {
    return full_features(model, view, true);
}

TrainState pretrain(const MultiViewDataset& ds, const TrainConfig& cfg) {
    validate_dataset(ds, cfg);
    if (cfg.pretrain_epochs < 1) throw std::invalid_argument("pretrain_epochs must be >= 1");
    TrainState state;
    state.rng = RandomSource(cfg.seed);
    for (std::size_t v = 0; v < ds.n_views(); ++v) {
        RandomSource rng = state.rng.split(kStreamModelInit + v);
        std::vector<std::size_t> dims;
        dims.push_back(ds.views[v].cols());
        dims.insert(dims.end(), cfg.encoder_hidden.begin(), cfg.encoder_hidden.end());
        dims.push_back(cfg.h_dim);
        state.models.push_back(make_view_model(dims, cfg.hhat_dim, rng));
    }
    for (int epoch = 1; epoch <= cfg.pretrain_epochs; ++epoch) {
        train_epoch(state, ds, cfg, false, 0, epoch, epoch - 1);
    }
    return state;
}

void initialize_diagnostics(TrainState& state, const MultiViewDataset& ds,
                            const TrainConfig& cfg) {
    if (state.models.size() != ds.n_views()) {
        throw std::invalid_argument("initialize_diagnostics: state does not match dataset");
    }
    state.timeline.clear();
    update_diagnostics(state, ds, cfg, 0, true);  // low-level features at initialization
}

void finetune(TrainState& state, const MultiViewDataset& ds, const TrainConfig& cfg,
              const IterationCallback& on_iteration) {
    if (state.timeline.empty()) {
        throw std::invalid_argument("finetune: diagnostics not initialized");
    }
    if (cfg.cl_iterations < 1 || cfg.cl_epochs < 1) {
        throw std::invalid_argument("finetune: iterations and epochs must be >= 1");
    }
    for (int iter = 1; iter <= cfg.cl_iterations; ++iter) {
        for (int epoch = 1; epoch <= cfg.cl_epochs; ++epoch) {
            const int global_epoch =
                cfg.pretrain_epochs + (iter - 1) * cfg.cl_epochs + (epoch - 1);
            train_epoch(state, ds, cfg, true, iter, epoch, global_epoch);
        }
        update_diagnostics(state, ds, cfg, iter, false);  // projected features afterwards
        state.completed_iterations = iter;
        if (on_iteration) on_iteration(state, iter);
    }
}

std::vector<int> cluster_on_views(const TrainState& state, const MultiViewDataset& ds,
                                  const TrainConfig& cfg,
                                  const std::vector<std::size_t>& view_subset) {
    if (view_subset.empty()) throw std::invalid_argument("cluster_on_views: empty view set");
    std::size_t width = 0;
    std::vector<Matrix> feats;
    for (std::size_t v : view_subset) {
        if (v >= state.models.size()) throw std::invalid_argument("cluster_on_views: bad view");
        feats.push_back(full_hhat(state.models[v], ds.views[v]));
        width += feats.back().cols();
    }
    Matrix concat(ds.n(), width);
    std::size_t offset = 0;
    for (const Matrix& f : feats) {
        for (std::size_t i = 0; i < f.rows(); ++i) {
            std::copy_n(f.row(i), f.cols(), concat.row(i) + offset);
        }
        offset += f.cols();
    }
    const KMeansResult km = kmeans(concat, kmeans_config(cfg, ds.k, kStreamFinalKmeans));
    return km.labels;
}

std::vector<int> final_cluster(const TrainState& state, const MultiViewDataset& ds,
                               const TrainConfig& cfg) {
    std::vector<std::size_t> all(ds.n_views());
    for (std::size_t v = 0; v < all.size(); ++v) all[v] = v;
    return cluster_on_views(state, ds, cfg, all);
}

namespace {

template <typename Fn>
auto phase(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("[phase=") + name + "] " + e.what());
    }
}

}  // namespace

RunReport run_training(const MultiViewDataset& dataset, const TrainConfig& cfg,
                       const RunOptions& opts) {
    const auto t_start = std::chrono::steady_clock::now();
    if (opts.mode != "dwcl" && opts.mode != "bsv") {
        throw std::invalid_argument("run_training: mode must be dwcl or bsv");
    }
    const std::string config_json =
        opts.config_snapshot.empty() ? train_config_to_json(cfg).dump() : opts.config_snapshot;
    const bool write_files = !opts.out_dir.empty();
    const fs::path ckpt_dir = fs::path(opts.out_dir) / "checkpoints";
    if (write_files && opts.write_checkpoints) fs::create_directories(ckpt_dir);

    const MultiViewDataset ds =
        phase("normalize", [&] { return normalize(dataset, cfg.normalization); });

    RunReport report;
    report.mode = opts.mode;
    report.config = nlohmann::json::parse(config_json);

    auto t0 = std::chrono::steady_clock::now();
    TrainState state = phase("pretrain", [&] { return pretrain(ds, cfg); });
    report.timings.pretrain_s = seconds_since(t0);
    if (write_files && opts.write_checkpoints) {
        save_view_models((ckpt_dir / "pretrain.ckpt").string(), state.models, config_json);
    }

    phase("initialize", [&] {
        initialize_diagnostics(state, ds, cfg);
        return 0;
    });

    if (opts.mode == "dwcl") {
        t0 = std::chrono::steady_clock::now();
        phase("finetune", [&] {
            IterationCallback cb;
            if (write_files && opts.write_checkpoints) {
                cb = [&](const TrainState& s, int iter) {
                    char name[32];
                    std::snprintf(name, sizeof(name), "iter_%03d.ckpt", iter);
                    save_view_models((ckpt_dir / name).string(), s.models, config_json);
                };
            }
            finetune(state, ds, cfg, cb);
            return 0;
        });
        report.timings.finetune_s = seconds_since(t0);
    }

    t0 = std::chrono::steady_clock::now();
    report.predicted_labels = phase("cluster", [&] {
        if (opts.mode == "bsv") {
            return cluster_on_views(state, ds, cfg, {state.diagnostics.best_view});
        }
        return final_cluster(state, ds, cfg);
    });
    report.timings.clustering_s = seconds_since(t0);

    if (ds.has_labels()) {
        phase("evaluate", [&] {
            report.has_metrics = true;
            report.acc = accuracy(report.predicted_labels, ds.labels, ds.k);
            report.nmi = nmi(report.predicted_labels, ds.labels);
            for (std::size_t v = 0; v < ds.n_views(); ++v) {
                const Matrix feats = full_hhat(state.models[v], ds.views[v]);
                const KMeansResult km =
                    kmeans(feats, kmeans_config(cfg, ds.k, kStreamViewMetrics + v));
                report.per_view_acc.push_back(accuracy(km.labels, ds.labels, ds.k));
                report.per_view_nmi.push_back(nmi(km.labels, ds.labels));
            }
            return 0;
        });
    }

    report.diagnostics = state.timeline;
    report.loss_log = state.loss_log;
    report.timings.total_s = seconds_since(t_start);

    if (write_files) {
        phase("report", [&] {
            emit_report(report, opts.out_dir);
            if (opts.write_checkpoints) {
                save_view_models((ckpt_dir / "final.ckpt").string(), state.models, config_json);
            }
            return 0;
        });
    }
    return report;
}

}  // namespace dwcl
