#include "ptc/knn.hpp"

#include <algorithm>
#include <cmath>

#include "ptc/error.hpp"
#include "ptc/special.hpp"

namespace ptc {

namespace {
constexpr double kDistanceFloor = 1e-12;
}

std::vector<KnnEntropyResult> knn_entropy_sweep(const Matrix& samples,
                                                const std::vector<int>& ks) {
    const std::size_t s = samples.rows();
    const std::size_t d = samples.cols();
    if (ks.empty()) return {};
    int max_k = 0;
    for (int k : ks) {
        if (k < 1 || static_cast<std::size_t>(k) >= s)
            throw ArgumentError("k-NN entropy needs 1 <= k < s");
        max_k = std::max(max_k, k);
    }

    std::vector<double> log_distance_sums(ks.size(), 0.0);
    std::vector<std::size_t> floored(ks.size(), 0);
    std::vector<double> squared(s - 1);

    for (std::size_t i = 0; i < s; ++i) {
        const double* xi = samples.row(i);
        std::size_t m = 0;
        for (std::size_t j = 0; j < s; ++j) {
            if (j == i) continue;
            const double* xj = samples.row(j);
            double dist2 = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = xi[c] - xj[c];
                dist2 += diff * diff;
            }
            squared[m++] = dist2;
        }
        std::partial_sort(squared.begin(), squared.begin() + max_k, squared.end());
        for (std::size_t t = 0; t < ks.size(); ++t) {
            double rho = std::sqrt(squared[ks[t] - 1]);
            if (rho < kDistanceFloor) {
                rho = kDistanceFloor;
                ++floored[t];
            }
            log_distance_sums[t] += std::log(rho);
        }
    }

    const double psi_s = digamma(static_cast<double>(s));
    const double log_vd = unit_ball_log_volume(d);
    std::vector<KnnEntropyResult> results(ks.size());
    for (std::size_t t = 0; t < ks.size(); ++t) {
        results[t].entropy = psi_s - digamma(static_cast<double>(ks[t])) + log_vd +
                             static_cast<double>(d) / static_cast<double>(s) *
                                 log_distance_sums[t];
        results[t].floored_distances = floored[t];
    }
    return results;
}

KnnEntropyResult knn_entropy_detail(const Matrix& samples, int k) {
    return knn_entropy_sweep(samples, {k}).front();
}

double knn_entropy(const Matrix& samples, int k) {
    return knn_entropy_detail(samples, k).entropy;
}

}  // namespace ptc
