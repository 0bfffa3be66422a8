#pragma once

#include "dwcl/matrix.hpp"

namespace dwcl {

// OpenMP-parallel dense kernels. Every output element is produced by exactly
// one thread with a fixed inner summation order, so results are identical for
// any thread count and match the serial reference kernels in ref_kernels.hpp.

/// N x N Euclidean distance matrix between the rows of x.
/// Exactly symmetric with an exactly zero diagonal. Rejects non-finite input.
Matrix pairwise_distances(const Matrix& x);

/// N x M cosine similarities between rows of a and rows of b.
/// Throws on a zero-norm row instead of emitting NaN.
Matrix cosine_similarity(const Matrix& a, const Matrix& b);

/// Copy of m with unit-norm rows; optionally returns the row norms.
/// Throws on a zero-norm row.
Matrix normalize_rows(const Matrix& m, std::vector<double>* norms = nullptr);

/// c = a * b, a is n x k, b is k x m.
Matrix matmul_nn(const Matrix& a, const Matrix& b);

/// c = a * b^T, a is n x k, b is m x k.
Matrix matmul_nt(const Matrix& a, const Matrix& b);

/// c = a^T * b, a is n x p, b is n x q.
Matrix matmul_tn(const Matrix& a, const Matrix& b);

}  // namespace dwcl
