#include "dwcl/ref_kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace dwcl::ref {

Matrix pairwise_distances(const Matrix& x) {
    Matrix out(x.rows(), x.rows(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.rows(); ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < x.cols(); ++c) {
                const double diff = x(i, c) - x(j, c);
                s += diff * diff;
            }
            out(i, j) = std::sqrt(s);
        }
    }
    return out;
}

Matrix cosine_similarity(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows(), b.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            double dot = 0.0, na = 0.0, nb = 0.0;
            for (std::size_t c = 0; c < a.cols(); ++c) {
                dot += a(i, c) * b(j, c);
                na += a(i, c) * a(i, c);
                nb += b(j, c) * b(j, c);
            }
            if (na == 0.0 || nb == 0.0) {
                throw std::invalid_argument("ref::cosine_similarity: zero-norm row");
            }
            out(i, j) = dot / (std::sqrt(na) * std::sqrt(nb));
        }
    }
    return out;
}

Matrix matmul_nn(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t p = 0; p < a.cols(); ++p) {
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += a(i, p) * b(p, j);
            }
        }
    }
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < a.cols(); ++p) s += a(i, p) * b(j, p);
            c(i, j) = s;
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    Matrix c(a.cols(), b.cols(), 0.0);
    for (std::size_t i = 0; i < a.cols(); ++i) {
        for (std::size_t r = 0; r < a.rows(); ++r) {
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += a(r, i) * b(r, j);
            }
        }
    }
    return c;
}

}  // namespace dwcl::ref
