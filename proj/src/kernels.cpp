#include "dwcl/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dwcl {

Matrix pairwise_distances(const Matrix& x) {
    if (x.rows() < 1 || x.cols() < 1) {
        throw std::invalid_argument("pairwise_distances: empty input");
    }
    if (!is_finite(x)) {
        throw std::invalid_argument("pairwise_distances: non-finite input");
    }
    const std::int64_t n = static_cast<std::int64_t>(x.rows());
    const std::size_t d = x.cols();
    Matrix out(x.rows(), x.rows(), 0.0);
    // Each (i, j) pair with i < j is computed once and mirrored; the writes
    // from different i never touch the same element.
    #pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        const double* xi = x.row(static_cast<std::size_t>(i));
        for (std::int64_t j = i + 1; j < n; ++j) {
            const double* xj = x.row(static_cast<std::size_t>(j));
            double s = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = xi[c] - xj[c];
                s += diff * diff;
            }
            const double dist = std::sqrt(s);
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = dist;
            out(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = dist;
        }
    }
    return out;
}

Matrix normalize_rows(const Matrix& m, std::vector<double>* norms) {
    if (!is_finite(m)) {
        throw std::invalid_argument("normalize_rows: non-finite input");
    }
    if (norms) norms->assign(m.rows(), 0.0);
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* src = m.row(i);
        double s = 0.0;
        for (std::size_t c = 0; c < m.cols(); ++c) s += src[c] * src[c];
        const double norm = std::sqrt(s);
        if (norm == 0.0) {
            throw std::invalid_argument("normalize_rows: zero-norm row " + std::to_string(i));
        }
        if (norms) (*norms)[i] = norm;
        double* dst = out.row(i);
        const double inv = 1.0 / norm;
        for (std::size_t c = 0; c < m.cols(); ++c) dst[c] = src[c] * inv;
    }
    return out;
}

Matrix cosine_similarity(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw std::invalid_argument("cosine_similarity: dimension mismatch");
    }
    return matmul_nt(normalize_rows(a), normalize_rows(b));
}

Matrix matmul_nn(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul_nn: shape mismatch");
    }
    const std::int64_t n = static_cast<std::int64_t>(a.rows());
    const std::size_t k = a.cols();
    const std::size_t m = b.cols();
    Matrix c(a.rows(), m, 0.0);
    #pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const double* ai = a.row(static_cast<std::size_t>(i));
        double* ci = c.row(static_cast<std::size_t>(i));
        for (std::size_t p = 0; p < k; ++p) {
            const double av = ai[p];
            const double* bp = b.row(p);
            for (std::size_t j = 0; j < m; ++j) {
                ci[j] += av * bp[j];
            }
        }
    }
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw std::invalid_argument("matmul_nt: shape mismatch");
    }
    const std::int64_t n = static_cast<std::int64_t>(a.rows());
    const std::size_t m = b.rows();
    const std::size_t k = a.cols();
    Matrix c(a.rows(), m, 0.0);
    #pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const double* ai = a.row(static_cast<std::size_t>(i));
        double* ci = c.row(static_cast<std::size_t>(i));
        for (std::size_t j = 0; j < m; ++j) {
            const double* bj = b.row(j);
            double s = 0.0;
            for (std::size_t p = 0; p < k; ++p) s += ai[p] * bj[p];
            ci[j] = s;
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("matmul_tn: shape mismatch");
    }
    const std::int64_t p = static_cast<std::int64_t>(a.cols());
    const std::size_t n = a.rows();
    const std::size_t q = b.cols();
    Matrix c(a.cols(), q, 0.0);
    #pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < p; ++i) {
        double* ci = c.row(static_cast<std::size_t>(i));
        for (std::size_t r = 0; r < n; ++r) {
            const double av = a(r, static_cast<std::size_t>(i));
            const double* br = b.row(r);
            for (std::size_t j = 0; j < q; ++j) {
                ci[j] += av * br[j];
            }
        }
    }
    return c;
}

}  // namespace dwcl
