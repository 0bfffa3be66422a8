#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dwcl/loss.hpp"
#include "dwcl/weights.hpp"

namespace dwcl {

struct PhaseTimings {
    double pretrain_s = 0.0;
    double finetune_s = 0.0;
    double clustering_s = 0.0;
    double total_s = 0.0;
};

/// Everything one run produces. Metric fields are meaningful only when
/// has_metrics is set (the dataset carried ground-truth labels).
struct RunReport {
    std::string mode = "dwcl";
    bool has_metrics = false;
    double acc = 0.0;
    double nmi = 0.0;
    std::vector<double> per_view_acc;
    std::vector<double> per_view_nmi;
    std::vector<ViewDiagnostics> diagnostics;  // one entry per iteration, 0 = init
    std::vector<LossLogRow> loss_log;
    PhaseTimings timings;
    nlohmann::json config;
    std::vector<int> predicted_labels;
};

/// JSON view of the report (the content of report.json).
nlohmann::json report_to_json(const RunReport& report);

/// Writes report.json, losses.csv, loss_curve.svg, diagnostics.json and
/// labels_pred.csv into out_dir. Content is deterministic for a
/// deterministic run except for the timing fields.
void emit_report(const RunReport& report, const std::string& out_dir);

}  // namespace dwcl
