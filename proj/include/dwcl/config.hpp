#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwcl/data.hpp"
#include "dwcl/trainer.hpp"

namespace dwcl {

std::string to_string(Mechanism m);
std::string to_string(WeightMode w);
std::string to_string(Normalization n);
Mechanism mechanism_from_string(const std::string& s);
WeightMode weight_mode_from_string(const std::string& s);
Normalization normalization_from_string(const std::string& s);

nlohmann::json train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);
nlohmann::json synthetic_spec_to_json(const SyntheticSpec& spec);

/// A full run description: exactly one data source, the training
/// configuration, output location, repeat count and mode.
struct RunConfig {
    std::string dataset_path;                 // one of dataset_path ...
    std::optional<SyntheticSpec> synthetic;   // ... or synthetic is set
    TrainConfig train;
    std::string out_dir;
    int repeats = 1;
    std::string mode = "dwcl";
};

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& cfg);

/// Ablation grid: mechanisms x weight modes over a shared base run config.
struct GridConfig {
    RunConfig base;
    std::vector<Mechanism> mechanisms;
    std::vector<WeightMode> weight_modes;
    int repeats = 5;
};

GridConfig grid_config_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);

/// Loads the run config's data source (directory or synthetic generator).
MultiViewDataset load_run_dataset(const RunConfig& cfg);

}  // namespace dwcl
