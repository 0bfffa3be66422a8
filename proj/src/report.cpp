#include "dwcl/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace dwcl {

namespace {

nlohmann::json diagnostics_to_json(const std::vector<ViewDiagnostics>& timeline) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& d : timeline) {
        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& p : d.pairs) {
            pairs.push_back({{"a", p.view_a},
                             {"b", p.view_b},
                             {"w_si", p.w_si},
                             {"cmi", p.cmi},
                             {"w_cmi", p.w_cmi},
                             {"w_dual", p.w_dual}});
        }
        arr.push_back({{"iteration", d.iteration},
                       {"si", d.si_means},
                       {"w_si", d.w_si_view},
                       {"best_view", d.best_view},
                       {"pairs", pairs}});
    }
    return arr;
}

// minimal polyline plot of the loss history
void write_loss_svg(const fs::path& path, const std::vector<LossLogRow>& log) {
    const int width = 720, height = 360, margin = 40;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("emit_report: cannot open " + path.string());
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (log.size() >= 2) {
        double lo = log.front().total, hi = log.front().total;
        for (const auto& row : log) {
            lo = std::min(lo, row.total);
            hi = std::max(hi, row.total);
        }
        if (hi <= lo) hi = lo + 1.0;
        auto emit_line = [&](auto get, const char* color) {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
            char buf[64];
            for (std::size_t i = 0; i < log.size(); ++i) {
                const double x = margin + (width - 2.0 * margin) * static_cast<double>(i) /
                                              static_cast<double>(log.size() - 1);
                const double y = height - margin -
                                 (height - 2.0 * margin) * (get(log[i]) - lo) / (hi - lo);
                std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", x, y);
                os << buf;
            }
            os << "\"/>\n";
        };
        emit_line([](const LossLogRow& r) { return r.total; }, "#1f77b4");
        bool any_contrastive = false;
        for (const auto& row : log) any_contrastive |= (row.contrastive != 0.0);
        if (any_contrastive) {
            emit_line([](const LossLogRow& r) { return r.contrastive; }, "#d62728");
        }
        char label[128];
        std::snprintf(label, sizeof(label),
                      "<text x=\"%d\" y=\"%d\" font-size=\"12\">total loss, min %.6g max %.6g"
                      "</text>\n",
                      margin, margin - 10, lo, hi);
        os << label;
    }
    os << "</svg>\n";
    if (!os) throw std::runtime_error("emit_report: write failed for " + path.string());
}

}  // namespace

nlohmann::json report_to_json(const RunReport& report) {
    nlohmann::json j;
    j["mode"] = report.mode;
    if (report.has_metrics) {
        j["acc"] = report.acc;
        j["nmi"] = report.nmi;
        j["per_view_acc"] = report.per_view_acc;
        j["per_view_nmi"] = report.per_view_nmi;
    } else {
        j["acc"] = nullptr;
        j["nmi"] = nullptr;
        j["per_view_acc"] = nlohmann::json::array();
        j["per_view_nmi"] = nlohmann::json::array();
    }
    nlohmann::json best_views = nlohmann::json::array();
    for (const auto& d : report.diagnostics) best_views.push_back(d.best_view);
    j["best_view_timeline"] = best_views;
    j["weights_timeline"] = diagnostics_to_json(report.diagnostics);
    j["timings"] = {{"pretrain_s", report.timings.pretrain_s},
                    {"finetune_s", report.timings.finetune_s},
                    {"clustering_s", report.timings.clustering_s},
                    {"total_s", report.timings.total_s}};
    j["config"] = report.config;
    return j;
}

void emit_report(const RunReport& report, const std::string& out_dir) {
    fs::create_directories(out_dir);
    {
        std::ofstream os(fs::path(out_dir) / "report.json");
        if (!os) throw std::runtime_error("emit_report: cannot write to " + out_dir);
        os << report_to_json(report).dump(2) << '\n';
    }
    {
        std::ofstream os(fs::path(out_dir) / "losses.csv");
        os << "iteration,epoch,batch,total,contrastive,reconstruction\n";
        char buf[160];
        for (const auto& row : report.loss_log) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%.17g,%.17g\n", row.iteration,
                          row.epoch, row.batch, row.total, row.contrastive, row.reconstruction);
            os << buf;
        }
        if (!os) throw std::runtime_error("emit_report: write failed for losses.csv");
    }
    write_loss_svg(fs::path(out_dir) / "loss_curve.svg", report.loss_log);
    {
        std::ofstream os(fs::path(out_dir) / "diagnostics.json");
        os << diagnostics_to_json(report.diagnostics).dump(2) << '\n';
    }
    {
        std::ofstream os(fs::path(out_dir) / "labels_pred.csv");
        for (int l : report.predicted_labels) os << l << '\n';
        if (!os) throw std::runtime_error("emit_report: write failed for labels_pred.csv");
    }
}

}  // namespace dwcl
