#pragma once

#include "dwcl/matrix.hpp"

namespace dwcl::ref {

// Serial scalar-loop reference implementations of the kernels in
// kernels.hpp. Kept as the independent oracle for the test suite and as the
// baseline side of the kernel benchmark. No OpenMP, no shared code with the
// parallel versions.

Matrix pairwise_distances(const Matrix& x);
Matrix cosine_similarity(const Matrix& a, const Matrix& b);
Matrix matmul_nn(const Matrix& a, const Matrix& b);
Matrix matmul_nt(const Matrix& a, const Matrix& b);
Matrix matmul_tn(const Matrix& a, const Matrix& b);

}  // namespace dwcl::ref
