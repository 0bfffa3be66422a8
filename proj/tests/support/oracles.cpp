#include "oracles.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dwcl/loss.hpp"

namespace oracle {

dwcl::Matrix random_matrix(dwcl::RandomSource& rng, std::size_t rows, std::size_t cols,
                           double scale) {
    dwcl::Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal() * scale;
    return m;
}

std::vector<int> random_labels(dwcl::RandomSource& rng, std::size_t n, std::size_t k) {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = static_cast<int>(rng.uniform_below(k));
    }
    return labels;
}

std::vector<double> silhouette_values(const dwcl::Matrix& points,
                                      const std::vector<int>& labels) {
    const std::size_t n = points.rows();
    int k = 0;
    for (int l : labels) k = std::max(k, l + 1);
    auto dist = [&](std::size_t i, std::size_t j) {
        double s = 0.0;
        for (std::size_t c = 0; c < points.cols(); ++c) {
            const double d = points(i, c) - points(j, c);
            s += d * d;
        }
        return std::sqrt(s);
    };
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (int l : labels) sizes[static_cast<std::size_t>(l)]++;

    std::vector<double> si(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t own = static_cast<std::size_t>(labels[i]);
        if (sizes[own] <= 1) {
            si[i] = 0.0;
            continue;
        }
        double a = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && labels[j] == labels[i]) a += dist(i, j);
        }
        a /= static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c == labels[i] || sizes[static_cast<std::size_t>(c)] == 0) continue;
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (labels[j] == c) sum += dist(i, j);
            }
            b = std::min(b, sum / static_cast<double>(sizes[static_cast<std::size_t>(c)]));
        }
        const double denom = std::max(a, b);
        si[i] = denom == 0.0 ? 0.0 : (b - a) / denom;
    }
    return si;
}

double silhouette_mean(const dwcl::Matrix& points, const std::vector<int>& labels) {
    const std::vector<double> si = silhouette_values(points, labels);
    double total = 0.0;
    for (double v : si) total += v;
    return total / static_cast<double>(si.size());
}

double normalized_mi(const std::vector<int>& a, const std::vector<int>& b) {
    int ka = 0, kb = 0;
    for (int l : a) ka = std::max(ka, l + 1);
    for (int l : b) kb = std::max(kb, l + 1);
    const double n = static_cast<double>(a.size());
    std::vector<std::vector<double>> table(static_cast<std::size_t>(ka),
                                           std::vector<double>(static_cast<std::size_t>(kb), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        table[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])] += 1.0;
    }
    std::vector<double> ra(static_cast<std::size_t>(ka), 0.0), rb(static_cast<std::size_t>(kb), 0.0);
    for (int i = 0; i < ka; ++i) {
        for (int j = 0; j < kb; ++j) {
            ra[static_cast<std::size_t>(i)] += table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            rb[static_cast<std::size_t>(j)] += table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    double ha = 0.0, hb = 0.0;
    for (double c : ra) {
        if (c > 0.0) ha -= (c / n) * std::log(c / n);
    }
    for (double c : rb) {
        if (c > 0.0) hb -= (c / n) * std::log(c / n);
    }
    if (ha == 0.0 && hb == 0.0) return 1.0;
    if (ha == 0.0 || hb == 0.0) return 0.0;
    double mi = 0.0;
    for (int i = 0; i < ka; ++i) {
        for (int j = 0; j < kb; ++j) {
            const double c = table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (c > 0.0) {
                mi += (c / n) *
                      std::log((c * n) / (ra[static_cast<std::size_t>(i)] *
                                          rb[static_cast<std::size_t>(j)]));
            }
        }
    }
    double cmi = 2.0 * mi / (ha + hb);
    return std::clamp(cmi, 0.0, 1.0);
}

double best_assignment_total(const dwcl::Matrix& confusion) {
    const std::size_t k = confusion.rows();
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best = -1.0;
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i) total += confusion(i, perm[i]);
        best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

double assignment_inertia(const dwcl::Matrix& points, const std::vector<int>& labels,
                          std::size_t k) {
    const std::size_t d = points.cols();
    dwcl::Matrix means(k, d, 0.0);
    std::vector<double> counts(k, 0.0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        counts[static_cast<std::size_t>(labels[i])] += 1.0;
        for (std::size_t c = 0; c < d; ++c) {
            means(static_cast<std::size_t>(labels[i]), c) += points(i, c);
        }
    }
    for (std::size_t g = 0; g < k; ++g) {
        if (counts[g] == 0.0) continue;
        for (std::size_t c = 0; c < d; ++c) means(g, c) /= counts[g];
    }
    double inertia = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        for (std::size_t c = 0; c < d; ++c) {
            const double diff = points(i, c) - means(static_cast<std::size_t>(labels[i]), c);
            inertia += diff * diff;
        }
    }
    return inertia;
}

dwcl::Matrix mlp_eval(const dwcl::Mlp& mlp, const dwcl::Matrix& x) {
    dwcl::Matrix cur = x;
    for (const auto& layer : mlp.layers) {
        dwcl::Matrix next(cur.rows(), layer.spec.out_dim, 0.0);
        for (std::size_t i = 0; i < cur.rows(); ++i) {
            for (std::size_t o = 0; o < layer.spec.out_dim; ++o) {
                double s = layer.b(0, o);
                for (std::size_t c = 0; c < layer.spec.in_dim; ++c) {
                    s += cur(i, c) * layer.w(c, o);
                }
                if (layer.spec.activation == dwcl::Activation::ReLU && s < 0.0) s = 0.0;
                next(i, o) = s;
            }
        }
        cur = std::move(next);
    }
    return cur;
}

namespace {

void collect(std::vector<double*>& out, dwcl::Mlp& mlp) {
    for (auto& layer : mlp.layers) {
        for (std::size_t i = 0; i < layer.w.size(); ++i) out.push_back(layer.w.data() + i);
        for (std::size_t i = 0; i < layer.b.size(); ++i) out.push_back(layer.b.data() + i);
    }
}

void collect_grads(std::vector<double>& out, const dwcl::MlpGrads& grads) {
    for (std::size_t k = 0; k < grads.w.size(); ++k) {
        for (std::size_t i = 0; i < grads.w[k].size(); ++i) out.push_back(grads.w[k].data()[i]);
        for (std::size_t i = 0; i < grads.b[k].size(); ++i) out.push_back(grads.b[k].data()[i]);
    }
}

}  // namespace

std::vector<double*> param_ptrs(dwcl::ViewModel& model) {
    std::vector<double*> out;
    collect(out, model.encoder);
    collect(out, model.projection);
    collect(out, model.decoder);
    return out;
}

std::vector<double> flatten_grads(const dwcl::ViewGrads& grads) {
    std::vector<double> out;
    collect_grads(out, grads.encoder);
    collect_grads(out, grads.projection);
    collect_grads(out, grads.decoder);
    return out;
}

double composite_pair_loss(const dwcl::ViewModel& model_a, const dwcl::ViewModel& model_b,
                           const dwcl::Matrix& xa, const dwcl::Matrix& xb, double tau,
                           double gamma, double w, double lambda) {
    const dwcl::ViewForward fa = dwcl::view_forward(model_a, xa);
    const dwcl::ViewForward fb = dwcl::view_forward(model_b, xb);
    const double contrastive = dwcl::info_nce(fa.hhat, fb.hhat, tau).loss;
    const double rec_a = dwcl::reconstruction_loss(xa, fa.xrec).loss;
    const double rec_b = dwcl::reconstruction_loss(xb, fb.xrec).loss;
    return gamma * w * contrastive + lambda * (rec_a + rec_b);
}

double max_grad_rel_err(const std::vector<double*>& params,
                        const std::vector<double>& analytic,
                        const std::function<double()>& fn, double step) {
    if (params.size() != analytic.size()) {
        throw std::invalid_argument("max_grad_rel_err: size mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = *params[i];
        *params[i] = saved + step;
        const double up = fn();
        *params[i] = saved - step;
        const double down = fn();
        *params[i] = saved;
        const double fd = (up - down) / (2.0 * step);
        const double denom = std::max({1e-6, std::abs(fd), std::abs(analytic[i])});
        worst = std::max(worst, std::abs(fd - analytic[i]) / denom);
    }
    return worst;
}

std::string make_temp_dir(const std::string& prefix) {
    static std::uint64_t counter = 0;
    const auto base = std::filesystem::temp_directory_path();
    for (;;) {
        const std::string name = prefix + "_" + std::to_string(::getpid()) + "_" +
                                 std::to_string(counter++);
        const auto path = base / name;
        if (std::filesystem::create_directories(path)) return path.string();
    }
}

}  // namespace oracle
