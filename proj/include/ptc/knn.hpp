#pragma once

#include <cstddef>
#include <vector>

#include "ptc/matrix.hpp"

namespace ptc {

struct KnnEntropyResult {
    double entropy = 0.0;
    std::size_t floored_distances = 0;  // neighbor distances clamped at 1e-12
};

/// Kozachenko-Leonenko style k-NN differential entropy,
///   psi(s) - psi(k) + log V_d + (d/s) sum_i log rho_{k,i},
/// with rho_{k,i} the Euclidean distance from sample i to its k-th nearest
/// neighbor (self excluded) and V_d the unit d-ball volume. Near-coincident
/// points have their distance floored at 1e-12 so the log stays finite; the
/// result reports how many were floored.
KnnEntropyResult knn_entropy_detail(const Matrix& samples, int k);

double knn_entropy(const Matrix& samples, int k);

/// One pass over the pairwise distances serving several k values at once.
/// ks need not be sorted; each must satisfy 1 <= k < s.
std::vector<KnnEntropyResult> knn_entropy_sweep(const Matrix& samples,
                                                const std::vector<int>& ks);

}  // namespace ptc
