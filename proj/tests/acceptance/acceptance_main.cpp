// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run via ctest or directly; --only N restricts to one criterion.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "dwcl/bench.hpp"
#include "dwcl/cli.hpp"
#include "dwcl/cluster.hpp"
#include "dwcl/config.hpp"
#include "dwcl/eval.hpp"
#include "dwcl/kernels.hpp"
#include "dwcl/loss.hpp"
#include "dwcl/net.hpp"
#include "dwcl/trainer.hpp"
#include "dwcl/weights.hpp"
#include "oracles.hpp"

namespace {

struct Criterion {
    int id;
    const char* title;
    std::function<bool(std::string&)> run;
};

bool check(bool ok, std::string& detail, const std::string& msg) {
    if (!ok && detail.empty()) detail = msg;
    return ok;
}

// 1. silhouette oracle equivalence ------------------------------------------
bool criterion_silhouette(std::string& detail) {
    dwcl::RandomSource rng(101);
    bool ok = true;
    double worst = 0.0;
    for (int round = 0; round < 50; ++round) {
        const std::size_t n = 20 + rng.uniform_below(181);   // <= 200
        const std::size_t k = 2 + rng.uniform_below(4);      // <= 5
        const std::size_t d = 1 + rng.uniform_below(8);      // <= 8
        const dwcl::Matrix points = oracle::random_matrix(rng, n, d, 2.0);
        std::vector<int> labels = oracle::random_labels(rng, n, k);
        // force at least two clusters
        labels[0] = 0;
        labels[1] = 1;
        const dwcl::SilhouetteReport report = dwcl::silhouette(points, labels);
        const std::vector<double> want = oracle::silhouette_values(points, labels);
        for (std::size_t i = 0; i < want.size(); ++i) {
            worst = std::max(worst, std::abs(report.per_instance[i] - want[i]));
        }
        const double want_mean = oracle::silhouette_mean(points, labels);
        worst = std::max(worst, std::abs(report.mean - want_mean));
    }
    ok = check(worst <= 1e-10, detail, "max deviation " + std::to_string(worst));
    if (ok) detail = "50 instances, max deviation " + std::to_string(worst);
    return ok;
}

// 2. CMI/NMI oracle equivalence ----------------------------------------------
bool criterion_cmi(std::string& detail) {
    dwcl::RandomSource rng(202);
    double worst = 0.0;
    for (int round = 0; round < 50; ++round) {
        const std::size_t n = 10 + rng.uniform_below(191);
        const std::size_t k = 2 + rng.uniform_below(5);
        std::vector<int> a = oracle::random_labels(rng, n, k);
        std::vector<int> b = oracle::random_labels(rng, n, k);
        const dwcl::CmiWeight got = dwcl::cmi_weight(a, b, k);
        const double want = oracle::normalized_mi(a, b);
        worst = std::max(worst, std::abs(got.cmi - want));
        worst = std::max(worst, std::abs(dwcl::nmi(a, b) - want));
    }
    if (!check(worst <= 1e-10, detail, "max deviation " + std::to_string(worst))) return false;

    // identical labelings: weight is exactly e - 1
    std::vector<int> same = {0, 1, 2, 0, 1, 2, 1, 0};
    const dwcl::CmiWeight ident = dwcl::cmi_weight(same, same, 3);
    if (!check(std::abs(ident.weight - (std::exp(1.0) - 1.0)) <= 1e-12, detail,
               "identical labelings weight off"))
        return false;

    // independent product grid: zero mutual information
    std::vector<int> ga, gb;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            ga.push_back(i);
            gb.push_back(j);
        }
    }
    const dwcl::CmiWeight indep = dwcl::cmi_weight(ga, gb, 4);
    if (!check(std::abs(indep.weight) <= 1e-12, detail, "independent labelings weight off"))
        return false;
    detail = "50 pairs + identity + independence";
    return true;
}

// 3. hungarian vs exhaustive --------------------------------------------------
bool criterion_acc(std::string& detail) {
    dwcl::RandomSource rng(303);
    for (int round = 0; round < 100; ++round) {
        const std::size_t k = 2 + rng.uniform_below(5);  // <= 6
        dwcl::Matrix confusion(k, k);
        for (std::size_t i = 0; i < confusion.size(); ++i) {
            confusion.data()[i] = static_cast<double>(rng.uniform_below(50));
        }
        const std::vector<std::size_t> perm = dwcl::hungarian_match(confusion);
        double got = 0.0;
        for (std::size_t i = 0; i < k; ++i) got += confusion(i, perm[i]);
        const double want = oracle::best_assignment_total(confusion);
        if (!check(got == want, detail,
                   "round " + std::to_string(round) + ": " + std::to_string(got) + " vs " +
                       std::to_string(want)))
            return false;
    }
    detail = "100 matrices, exact";
    return true;
}

// 4. gradient integrity -------------------------------------------------------
bool criterion_gradients(std::string& detail) {
    dwcl::RandomSource rng(404);
    double worst = 0.0;
    for (int round = 0; round < 20; ++round) {
        const std::size_t batch = 2 + rng.uniform_below(5);   // <= 6
        const std::size_t din = 2 + rng.uniform_below(7);     // <= 8
        const std::size_t hidden = 2 + rng.uniform_below(7);
        const std::size_t h = 2 + rng.uniform_below(7);
        const std::size_t hhat = 2 + rng.uniform_below(7);
        const double tau = 0.3 + rng.uniform();
        const double gamma = 0.5 + rng.uniform();
        const double w = 0.3 + rng.uniform();
        const double lambda = 0.5 + rng.uniform();

        dwcl::RandomSource init_a = rng.split(round * 2);
        dwcl::RandomSource init_b = rng.split(round * 2 + 1);
        dwcl::ViewModel model_a = dwcl::make_view_model({din, hidden, h}, hhat, init_a);
        dwcl::ViewModel model_b = dwcl::make_view_model({din, hidden, h}, hhat, init_b);
        const dwcl::Matrix xa = oracle::random_matrix(rng, batch, din);
        const dwcl::Matrix xb = oracle::random_matrix(rng, batch, din);

        // analytic gradients of the composite loss
        dwcl::ViewTape tape_a, tape_b;
        const dwcl::ViewForward fa = dwcl::view_forward(model_a, xa, &tape_a);
        const dwcl::ViewForward fb = dwcl::view_forward(model_b, xb, &tape_b);
        const dwcl::InfoNceResult nce = dwcl::info_nce(fa.hhat, fb.hhat, tau);
        dwcl::ReconResult rec_a = dwcl::reconstruction_loss(xa, fa.xrec);
        dwcl::ReconResult rec_b = dwcl::reconstruction_loss(xb, fb.xrec);
        dwcl::Matrix ga = nce.grad_a, gb = nce.grad_b;
        for (std::size_t i = 0; i < ga.size(); ++i) ga.data()[i] *= gamma * w;
        for (std::size_t i = 0; i < gb.size(); ++i) gb.data()[i] *= gamma * w;
        for (std::size_t i = 0; i < rec_a.grad.size(); ++i) rec_a.grad.data()[i] *= lambda;
        for (std::size_t i = 0; i < rec_b.grad.size(); ++i) rec_b.grad.data()[i] *= lambda;
        const dwcl::ViewGrads grads_a = dwcl::view_backward(model_a, tape_a, &ga, &rec_a.grad);
        const dwcl::ViewGrads grads_b = dwcl::view_backward(model_b, tape_b, &gb, &rec_b.grad);

        std::vector<double*> params = oracle::param_ptrs(model_a);
        std::vector<double*> params_b = oracle::param_ptrs(model_b);
        params.insert(params.end(), params_b.begin(), params_b.end());
        std::vector<double> analytic = oracle::flatten_grads(grads_a);
        const std::vector<double> analytic_b = oracle::flatten_grads(grads_b);
        analytic.insert(analytic.end(), analytic_b.begin(), analytic_b.end());

        const double err = oracle::max_grad_rel_err(params, analytic, [&] {
            return oracle::composite_pair_loss(model_a, model_b, xa, xb, tau, gamma, w, lambda);
        });
        worst = std::max(worst, err);
    }
    const bool ok = check(worst <= 1e-4, detail, "max rel err " + std::to_string(worst));
    if (ok) detail = "20 configurations, max rel err " + std::to_string(worst);
    return ok;
}

// 5. theorem-bound invariants --------------------------------------------------
bool criterion_bounds(std::string& detail) {
    dwcl::RandomSource rng(505);
    for (int round = 0; round < 200; ++round) {
        const double si = rng.uniform();  // (0, 1) regime
        const double w_si = dwcl::view_quality_weight(si);
        if (si > 0.0 && si < 1.0) {
            if (!check(w_si > 1.0 && w_si < std::exp(1.0), detail, "w_si out of (1, e)"))
                return false;
        }
        const double si2 = rng.uniform();
        const double cross = dwcl::cross_view_quality_weight(si, si2);
        if (si > 0.0 && si < 1.0 && si2 > 0.0 && si2 < 1.0) {
            if (!check(cross > 1.0 && cross < std::exp(2.0), detail, "cross weight out of (1, e^2)"))
                return false;
        }
        const std::size_t n = 8 + rng.uniform_below(60);
        const std::size_t k = 2 + rng.uniform_below(4);
        const std::vector<int> a = oracle::random_labels(rng, n, k);
        const std::vector<int> b = oracle::random_labels(rng, n, k);
        const dwcl::CmiWeight cw = dwcl::cmi_weight(a, b, k);
        if (!check(cw.weight >= 0.0 && cw.weight <= std::exp(1.0) - 1.0 + 1e-12, detail,
                   "w_cmi out of [0, e-1]"))
            return false;
    }
    detail = "200 randomized states";
    return true;
}

// 6. mechanism cardinality and measured scaling ---------------------------------
bool criterion_scaling(std::string& detail) {
    dwcl::RandomSource rng(606);
    for (std::size_t v = 2; v <= 8; ++v) {
        std::vector<double> si(v, 0.1);
        std::vector<std::vector<int>> labels(v);
        for (auto& l : labels) l = oracle::random_labels(rng, 40, 3);
        const dwcl::CrossViewPlan bo = dwcl::build_plan(dwcl::Mechanism::BestOther, v, 0, si,
                                                        labels, 3);
        const dwcl::CrossViewPlan pw =
            dwcl::build_plan(dwcl::Mechanism::Pairwise, v, std::nullopt, si, labels, 3);
        if (!check(bo.pairs.size() == v - 1, detail, "BestOther size wrong at V=" +
                                                         std::to_string(v)))
            return false;
        if (!check(pw.pairs.size() == v * (v - 1) / 2, detail,
                   "Pairwise size wrong at V=" + std::to_string(v)))
            return false;
    }
    const dwcl::BenchResult bench =
        dwcl::run_contrastive_scaling_bench({4, 6, 8, 12, 16}, 96, 48, 3, 7);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "exponents bestother %.3f pairwise %.3f",
                  bench.exponent_bestother, bench.exponent_pairwise);
    detail = buf;
    return bench.exponent_bestother <= 1.3 && bench.exponent_pairwise >= 1.7;
}

// 7. end-to-end directional reproduction ----------------------------------------
bool criterion_end_to_end(std::string& detail) {
    dwcl::SyntheticSpec spec;
    spec.n = 1000;
    spec.k = 5;
    spec.latent_dim = 10;
    spec.cluster_separation = 6.0;
    spec.views = {{24, 3.0, true}, {24, 3.0, true}, {24, 3.0, true}, {24, 0.0, false}};

    dwcl::TrainConfig cfg;
    cfg.batch_size = 128;
    cfg.pretrain_epochs = 12;
    cfg.cl_iterations = 2;
    cfg.cl_epochs = 6;
    cfg.encoder_hidden = {128, 128, 256};
    cfg.h_dim = 64;
    cfg.hhat_dim = 32;
    cfg.adam.learning_rate = 1e-3;
    cfg.kmeans_restarts = 5;

    double acc_dwcl = 0.0, acc_bsv = 0.0, acc_pw = 0.0;
    const int seeds = 5;
    bool weak_never_best = true;
    for (int s = 0; s < seeds; ++s) {
        spec.seed = static_cast<std::uint64_t>(1000 + s);
        cfg.seed = static_cast<std::uint64_t>(s);
        const dwcl::MultiViewDataset raw = dwcl::generate_synthetic(spec);
        const dwcl::MultiViewDataset ds = dwcl::normalize(raw, cfg.normalization);

        // shared pretraining + initialization per seed, then branch per arm
        dwcl::TrainConfig base = cfg;
        base.normalization = dwcl::Normalization::None;  // already normalized here
        dwcl::TrainState pre = dwcl::pretrain(ds, base);
        dwcl::initialize_diagnostics(pre, ds, base);
        if (pre.diagnostics.best_view == 3) weak_never_best = false;

        // BSV: best single view of the pretrain-only model
        acc_bsv += dwcl::accuracy(
            dwcl::cluster_on_views(pre, ds, base, {pre.diagnostics.best_view}), ds.labels, ds.k);

        // DWCL: BestOther + dual
        {
            dwcl::TrainState state = pre;
            dwcl::TrainConfig arm = base;
            arm.mechanism = dwcl::Mechanism::BestOther;
            arm.weight_mode = dwcl::WeightMode::Dual;
            dwcl::finetune(state, ds, arm);
            acc_dwcl += dwcl::accuracy(dwcl::final_cluster(state, ds, arm), ds.labels, ds.k);
        }
        // Pairwise unweighted ablation arm
        {
            dwcl::TrainState state = pre;
            dwcl::TrainConfig arm = base;
            arm.mechanism = dwcl::Mechanism::Pairwise;
            arm.weight_mode = dwcl::WeightMode::None;
            dwcl::finetune(state, ds, arm);
            acc_pw += dwcl::accuracy(dwcl::final_cluster(state, ds, arm), ds.labels, ds.k);
        }
    }
    acc_dwcl /= seeds;
    acc_bsv /= seeds;
    acc_pw /= seeds;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "dwcl %.4f bsv %.4f pairwise %.4f weak-never-best %s",
                  acc_dwcl, acc_bsv, acc_pw, weak_never_best ? "yes" : "no");
    detail = buf;
    return acc_dwcl >= 0.90 && acc_dwcl >= acc_bsv && acc_dwcl >= acc_pw && weak_never_best;
}

// 8. end-to-end determinism -------------------------------------------------------
bool criterion_determinism(std::string& detail) {
    dwcl::RunConfig cfg;
    dwcl::SyntheticSpec spec;
    spec.n = 120;
    spec.k = 3;
    spec.latent_dim = 4;
    spec.cluster_separation = 6.0;
    spec.seed = 42;
    spec.views = {{6, 0.5, true}, {5, 0.0, false}};
    cfg.synthetic = spec;
    cfg.train.batch_size = 32;
    cfg.train.pretrain_epochs = 2;
    cfg.train.cl_iterations = 1;
    cfg.train.cl_epochs = 2;
    cfg.train.encoder_hidden = {16, 16};
    cfg.train.h_dim = 8;
    cfg.train.hhat_dim = 4;
    cfg.train.kmeans_restarts = 4;
    cfg.train.seed = 9;

    const std::string dir_a = oracle::make_temp_dir("dwcl_det_a");
    const std::string dir_b = oracle::make_temp_dir("dwcl_det_b");
    dwcl::RunConfig cfg_a = cfg;
    cfg_a.out_dir = dir_a;
    dwcl::RunConfig cfg_b = cfg;
    cfg_b.out_dir = dir_b;
    const dwcl::RunReport ra = dwcl::run_single(cfg_a);
    const dwcl::RunReport rb = dwcl::run_single(cfg_b);
    if (!check(ra.predicted_labels == rb.predicted_labels, detail, "labels differ")) return false;
    nlohmann::json ja = dwcl::report_to_json(ra);
    nlohmann::json jb = dwcl::report_to_json(rb);
    ja.erase("timings");
    jb.erase("timings");
    if (!check(ja == jb, detail, "reports differ beyond timings")) return false;
    detail = "identical labels and report";
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0) only = std::atoi(argv[i + 1]);
    }

    std::vector<Criterion> criteria = {
        {1, "silhouette oracle equivalence", criterion_silhouette},
        {2, "CMI/NMI oracle equivalence", criterion_cmi},
        {3, "optimal matching vs exhaustive search", criterion_acc},
        {4, "gradient integrity vs finite differences", criterion_gradients},
        {5, "weight bound invariants", criterion_bounds},
        {6, "mechanism cardinality and scaling", criterion_scaling},
        {7, "end-to-end directional reproduction", criterion_end_to_end},
        {8, "end-to-end determinism", criterion_determinism},
    };

    bool all_ok = true;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        std::string detail;
        bool ok = false;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %d: %s (%s) [%.1fs]\n", ok ? "PASS" : "FAIL", c.id, c.title,
                    detail.c_str(), secs);
        std::fflush(stdout);
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
