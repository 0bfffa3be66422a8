#pragma once

#include <vector>

#include "dwcl/matrix.hpp"

namespace dwcl {

/// Exact optimal assignment on a square nonnegative count matrix: returns the
/// permutation pi maximizing sum_k confusion(k, pi(k)).
std::vector<std::size_t> hungarian_match(const Matrix& confusion);

/// Clustering accuracy under the optimal cluster-to-class matching.
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth, std::size_t k);

/// Arithmetic-mean-normalized mutual information in [0, 1].
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

}  // namespace dwcl
