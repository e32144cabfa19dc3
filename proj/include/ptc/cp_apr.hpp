#pragma once

#include <cstdint>
#include <vector>

#include "ptc/kruskal.hpp"
#include "ptc/sparse_tensor.hpp"

namespace ptc {

struct FitConfig {
    std::size_t rank = 1;
    int max_outer_iters = 200;
    int max_inner_iters = 10;     // per-mode multiplicative steps
    double kkt_tol = 1e-4;        // stop when the KKT violation drops below
    double log_shift = 1e-10;     // guard inside logs and denominators
    std::uint64_t rng_seed = 0;
    double min_weight = 1e-300;   // underflow floor for component weights
};

struct FitResult {
    KruskalModel model;
    std::vector<double> loglik_trace;   // one value per outer iteration
    double final_kkt_violation = 0.0;
    int outer_iterations = 0;
    bool converged = false;
};

/// Poisson log-likelihood sum_i (t_i log m_i - m_i). The -sum m_i term
/// collapses to -sum_r lambda_r; the data term runs over nonzeros only,
/// with log(m_i + log_shift) guarding zero model values.
double log_likelihood(const KruskalModel& model, const SparseCountTensor& tensor,
                      double log_shift = 1e-10);

/// Random starting point: factor entries seeded uniform(0,1) with columns
/// normalized, weights total_count/R so the initial mass matches the data.
KruskalModel init_model(const Shape& shape, std::size_t rank, std::uint64_t seed,
                        double total_count);

/// Fits the rank-R Poisson CP model by alternating multiplicative
/// (majorization-minimization) mode updates; the likelihood trace is
/// non-decreasing and the result is deterministic given (tensor, config).
FitResult fit(const SparseCountTensor& tensor, const FitConfig& config);

}  // namespace ptc
