#include "dwcl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dwcl/weights.hpp"

namespace dwcl {

std::vector<std::size_t> hungarian_match(const Matrix& confusion) {
    if (confusion.rows() != confusion.cols()) {
        throw std::invalid_argument("hungarian_match: non-square input");
    }
    const std::size_t n = confusion.rows();
    if (n == 0) throw std::invalid_argument("hungarian_match: empty input");
    for (std::size_t i = 0; i < confusion.size(); ++i) {
        const double v = confusion.data()[i];
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("hungarian_match: entries must be nonnegative and finite");
        }
    }

    // shortest augmenting path assignment with potentials, minimizing -counts
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = -confusion(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> perm(n, 0);
    for (std::size_t j = 1; j <= n; ++j) perm[p[j] - 1] = j - 1;
    return perm;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth, std::size_t k) {
    if (pred.size() != truth.size()) throw std::invalid_argument("accuracy: length mismatch");
    if (pred.empty()) throw std::invalid_argument("accuracy: empty labelings");
    if (k == 0) throw std::invalid_argument("accuracy: k must be positive");
    Matrix confusion(k, k, 0.0);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const int a = pred[i], b = truth[i];
        if (a < 0 || static_cast<std::size_t>(a) >= k || b < 0 ||
            static_cast<std::size_t>(b) >= k) {
            throw std::invalid_argument("accuracy: label out of range");
        }
        confusion(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) += 1.0;
    }
    const std::vector<std::size_t> perm = hungarian_match(confusion);
    double matched = 0.0;
    for (std::size_t c = 0; c < k; ++c) matched += confusion(c, perm[c]);
    return matched / static_cast<double>(pred.size());
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size()) throw std::invalid_argument("nmi: length mismatch");
    if (pred.empty()) throw std::invalid_argument("nmi: empty labelings");
    int max_a = 0, max_b = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] < 0 || truth[i] < 0) throw std::invalid_argument("nmi: negative label");
        max_a = std::max(max_a, pred[i]);
        max_b = std::max(max_b, truth[i]);
    }
    return normalized_mi(pred, truth, static_cast<std::size_t>(max_a) + 1,
                         static_cast<std::size_t>(max_b) + 1);
}

}  // namespace dwcl
