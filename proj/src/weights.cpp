#include "dwcl/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace dwcl {

double view_quality_weight(double si_mean) { return std::exp(si_mean); }

double cross_view_quality_weight(double si_v, double si_b) {
    return view_quality_weight(si_v) * view_quality_weight(si_b);
}

double normalized_mi(const std::vector<int>& labels_a, const std::vector<int>& labels_b,
                     std::size_t ka, std::size_t kb) {
    if (labels_a.size() != labels_b.size()) {
        throw std::invalid_argument("normalized_mi: length mismatch");
    }
    if (labels_a.empty()) throw std::invalid_argument("normalized_mi: empty labelings");
    const std::size_t n = labels_a.size();
    std::vector<std::size_t> joint(ka * kb, 0), ma(ka, 0), mb(kb, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const int a = labels_a[i];
        const int b = labels_b[i];
        if (a < 0 || static_cast<std::size_t>(a) >= ka || b < 0 ||
            static_cast<std::size_t>(b) >= kb) {
            throw std::invalid_argument("normalized_mi: label out of range");
        }
        joint[static_cast<std::size_t>(a) * kb + static_cast<std::size_t>(b)]++;
        ma[static_cast<std::size_t>(a)]++;
        mb[static_cast<std::size_t>(b)]++;
    }
    const double dn = static_cast<double>(n);
    double ha = 0.0, hb = 0.0;
    for (std::size_t c = 0; c < ka; ++c) {
        if (ma[c] == 0) continue;
        const double p = static_cast<double>(ma[c]) / dn;
        ha -= p * std::log(p);
    }
    for (std::size_t c = 0; c < kb; ++c) {
        if (mb[c] == 0) continue;
        const double p = static_cast<double>(mb[c]) / dn;
        hb -= p * std::log(p);
    }
    if (ha == 0.0 && hb == 0.0) return 1.0;
    if (ha == 0.0 || hb == 0.0) return 0.0;
    double mi = 0.0;
    for (std::size_t a = 0; a < ka; ++a) {
        for (std::size_t b = 0; b < kb; ++b) {
            const std::size_t c = joint[a * kb + b];
            if (c == 0) continue;
            const double pj = static_cast<double>(c) / dn;
            const double pa = static_cast<double>(ma[a]) / dn;
            const double pb = static_cast<double>(mb[b]) / dn;
            mi += pj * std::log(pj / (pa * pb));
        }
    }
    double cmi = 2.0 * mi / (ha + hb);
    if (cmi < 0.0) cmi = 0.0;
    if (cmi > 1.0) cmi = 1.0;
    return cmi;
}

CmiWeight cmi_weight(const std::vector<int>& labels_v, const std::vector<int>& labels_b,
                     std::size_t k) {
    const double cmi = normalized_mi(labels_v, labels_b, k, k);
    return {cmi, std::expm1(cmi)};
}

CrossViewPlan build_plan(Mechanism mechanism, std::size_t n_views,
                         std::optional<std::size_t> best_view,
                         const std::vector<double>& si_means,
                         const std::vector<std::vector<int>>& per_view_labels,
                         std::size_t k) {
    if (n_views < 2) throw std::invalid_argument("build_plan: need at least 2 views");
    if (si_means.size() != n_views || per_view_labels.size() != n_views) {
        throw std::invalid_argument("build_plan: per-view inputs do not cover all views");
    }
    CrossViewPlan plan;
    plan.mechanism = mechanism;

    auto make_pair = [&](std::size_t a, std::size_t b) {
        PairWeight p;
        p.view_a = a;
        p.view_b = b;
        p.w_si = cross_view_quality_weight(si_means[a], si_means[b]);
        const CmiWeight cw = cmi_weight(per_view_labels[a], per_view_labels[b], k);
        p.cmi = cw.cmi;
        p.w_cmi = cw.weight;
        p.w_dual = p.w_cmi * p.w_si;
        return p;
    };

    if (mechanism == Mechanism::BestOther) {
        if (!best_view) throw std::invalid_argument("build_plan: BestOther requires a best view");
        const std::size_t b = *best_view;
        if (b >= n_views) throw std::invalid_argument("build_plan: best view out of range");
        plan.best_view = b;
        for (std::size_t v = 0; v < n_views; ++v) {
            if (v == b) continue;
            plan.pairs.push_back(make_pair(v, b));
        }
    } else {
        for (std::size_t a = 0; a < n_views; ++a) {
            for (std::size_t b = a + 1; b < n_views; ++b) {
                plan.pairs.push_back(make_pair(a, b));
            }
        }
    }
    return plan;
}

double effective_weight(const PairWeight& pair, WeightMode mode) {
    switch (mode) {
        case WeightMode::None: return 1.0;
        case WeightMode::CmiOnly: return pair.w_cmi;
        case WeightMode::SiOnly: return pair.w_si;
        case WeightMode::Dual: return pair.w_dual;
    }
    return pair.w_dual;
}

}  // namespace dwcl
