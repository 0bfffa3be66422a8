#include "dwcl/config.hpp"

#include <fstream>
#include <stdexcept>

namespace dwcl {

std::string to_string(Mechanism m) {
    return m == Mechanism::BestOther ? "bestother" : "pairwise";
}

std::string to_string(WeightMode w) {
    switch (w) {
        case WeightMode::None: return "none";
        case WeightMode::CmiOnly: return "cmi";
        case WeightMode::SiOnly: return "si";
        case WeightMode::Dual: return "dual";
    }
    return "dual";
}

std::string to_string(Normalization n) {
    switch (n) {
        case Normalization::MinMax: return "minmax";
        case Normalization::ZScore: return "zscore";
        case Normalization::None: return "none";
    }
    return "minmax";
}

Mechanism mechanism_from_string(const std::string& s) {
    if (s == "bestother" || s == "best-other" || s == "bo") return Mechanism::BestOther;
    if (s == "pairwise") return Mechanism::Pairwise;
    throw std::invalid_argument("unknown mechanism: " + s);
}

WeightMode weight_mode_from_string(const std::string& s) {
    if (s == "none") return WeightMode::None;
    if (s == "cmi" || s == "cmi_only") return WeightMode::CmiOnly;
    if (s == "si" || s == "si_only" || s == "sil") return WeightMode::SiOnly;
    if (s == "dual") return WeightMode::Dual;
    throw std::invalid_argument("unknown weight mode: " + s);
}

Normalization normalization_from_string(const std::string& s) {
    if (s == "minmax") return Normalization::MinMax;
    if (s == "zscore") return Normalization::ZScore;
    if (s == "none") return Normalization::None;
    throw std::invalid_argument("unknown normalization: " + s);
}

nlohmann::json train_config_to_json(const TrainConfig& cfg) {
    return {{"batch_size", cfg.batch_size},
            {"pretrain_epochs", cfg.pretrain_epochs},
            {"cl_iterations", cfg.cl_iterations},
            {"cl_epochs", cfg.cl_epochs},
            {"seed", cfg.seed},
            {"mechanism", to_string(cfg.mechanism)},
            {"weight_mode", to_string(cfg.weight_mode)},
            {"gamma", cfg.loss.gamma},
            {"lambda", cfg.loss.lambda},
            {"temperature", cfg.loss.temperature},
            {"learning_rate", cfg.adam.learning_rate},
            {"beta1", cfg.adam.beta1},
            {"beta2", cfg.adam.beta2},
            {"epsilon", cfg.adam.epsilon},
            {"kmeans_restarts", cfg.kmeans_restarts},
            {"kmeans_max_iters", cfg.kmeans_max_iters},
            {"kmeans_tol", cfg.kmeans_tol},
            {"h_dim", cfg.h_dim},
            {"hhat_dim", cfg.hhat_dim},
            {"encoder_hidden", cfg.encoder_hidden},
            {"normalization", to_string(cfg.normalization)}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
    TrainConfig cfg;
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.pretrain_epochs = j.value("pretrain_epochs", cfg.pretrain_epochs);
    cfg.cl_iterations = j.value("cl_iterations", cfg.cl_iterations);
    cfg.cl_epochs = j.value("cl_epochs", cfg.cl_epochs);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("mechanism")) cfg.mechanism = mechanism_from_string(j["mechanism"]);
    if (j.contains("weight_mode")) cfg.weight_mode = weight_mode_from_string(j["weight_mode"]);
    cfg.loss.gamma = j.value("gamma", cfg.loss.gamma);
    cfg.loss.lambda = j.value("lambda", cfg.loss.lambda);
    cfg.loss.temperature = j.value("temperature", cfg.loss.temperature);
    cfg.adam.learning_rate = j.value("learning_rate", cfg.adam.learning_rate);
    cfg.adam.beta1 = j.value("beta1", cfg.adam.beta1);
    cfg.adam.beta2 = j.value("beta2", cfg.adam.beta2);
    cfg.adam.epsilon = j.value("epsilon", cfg.adam.epsilon);
    cfg.kmeans_restarts = j.value("kmeans_restarts", cfg.kmeans_restarts);
    cfg.kmeans_max_iters = j.value("kmeans_max_iters", cfg.kmeans_max_iters);
    cfg.kmeans_tol = j.value("kmeans_tol", cfg.kmeans_tol);
    cfg.h_dim = j.value("h_dim", cfg.h_dim);
    cfg.hhat_dim = j.value("hhat_dim", cfg.hhat_dim);
    if (j.contains("encoder_hidden")) {
        cfg.encoder_hidden = j["encoder_hidden"].get<std::vector<std::size_t>>();
    }
    if (j.contains("normalization")) {
        cfg.normalization = normalization_from_string(j["normalization"]);
    }
    return cfg;
}

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j) {
    SyntheticSpec spec;
    spec.n = j.at("n").get<std::size_t>();
    spec.k = j.at("k").get<std::size_t>();
    spec.latent_dim = j.at("latent_dim").get<std::size_t>();
    spec.cluster_separation = j.value("cluster_separation", spec.cluster_separation);
    spec.seed = j.value("seed", spec.seed);
    for (const auto& v : j.at("views")) {
        SyntheticViewSpec vs;
        vs.dim = v.at("dim").get<std::size_t>();
        vs.noise_sigma = v.value("noise_sigma", 0.0);
        vs.informative = v.value("informative", true);
        spec.views.push_back(vs);
    }
    return spec;
}

nlohmann::json synthetic_spec_to_json(const SyntheticSpec& spec) {
    nlohmann::json views = nlohmann::json::array();
    for (const auto& v : spec.views) {
        views.push_back({{"dim", v.dim},
                         {"noise_sigma", v.noise_sigma},
                         {"informative", v.informative}});
    }
    return {{"n", spec.n},
            {"k", spec.k},
            {"latent_dim", spec.latent_dim},
            {"cluster_separation", spec.cluster_separation},
            {"seed", spec.seed},
            {"views", views}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    const auto& data = j.at("data");
    const bool has_path = data.contains("path");
    const bool has_synth = data.contains("synthetic");
    if (has_path == has_synth) {
        throw std::invalid_argument("config: data must name exactly one of path or synthetic");
    }
    if (has_path) cfg.dataset_path = data["path"].get<std::string>();
    if (has_synth) cfg.synthetic = synthetic_spec_from_json(data["synthetic"]);
    if (j.contains("train")) cfg.train = train_config_from_json(j["train"]);
    cfg.out_dir = j.value("out", cfg.out_dir);
    cfg.repeats = j.value("repeats", cfg.repeats);
    cfg.mode = j.value("mode", cfg.mode);
    if (cfg.mode != "dwcl" && cfg.mode != "bsv") {
        throw std::invalid_argument("config: mode must be dwcl or bsv");
    }
    if (cfg.repeats < 1) throw std::invalid_argument("config: repeats must be >= 1");
    return cfg;
}

nlohmann::json run_config_to_json(const RunConfig& cfg) {
    nlohmann::json data;
    if (cfg.synthetic) {
        data["synthetic"] = synthetic_spec_to_json(*cfg.synthetic);
    } else {
        data["path"] = cfg.dataset_path;
    }
    return {{"data", data},
            {"train", train_config_to_json(cfg.train)},
            {"out", cfg.out_dir},
            {"repeats", cfg.repeats},
            {"mode", cfg.mode}};
}

GridConfig grid_config_from_json(const nlohmann::json& j) {
    GridConfig grid;
    grid.base = run_config_from_json(j);
    if (!j.contains("mechanisms") || !j.contains("weight_modes")) {
        throw std::invalid_argument("grid config: mechanisms and weight_modes are required");
    }
    for (const auto& m : j["mechanisms"]) {
        grid.mechanisms.push_back(mechanism_from_string(m.get<std::string>()));
    }
    for (const auto& w : j["weight_modes"]) {
        grid.weight_modes.push_back(weight_mode_from_string(w.get<std::string>()));
    }
    if (grid.mechanisms.empty() || grid.weight_modes.empty()) {
        throw std::invalid_argument("grid config: empty arm lists");
    }
    grid.repeats = j.value("repeats", grid.repeats);
    if (grid.repeats < 1) throw std::invalid_argument("grid config: repeats must be >= 1");
    return grid;
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("bad JSON in " + path + ": " + e.what());
    }
    return j;
}

MultiViewDataset load_run_dataset(const RunConfig& cfg) {
    if (cfg.synthetic) return generate_synthetic(*cfg.synthetic);
    return load_dataset(cfg.dataset_path);
}

}  // namespace dwcl
