#include "ptc/cp_apr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptc/rng.hpp"

namespace ptc {

double log_likelihood(const KruskalModel& model, const SparseCountTensor& tensor,
                      double log_shift) {
    if (model.shape != tensor.shape())
        throw ArgumentError("model shape does not match tensor shape");
    const std::size_t d = model.ndim();
    const std::size_t rank = model.rank;
    double data_term = 0.0;
    for (std::size_t e = 0; e < tensor.nnz(); ++e) {
        const Coord* coords = tensor.coordinates().data() + e * d;
        double value = 0.0;
        for (std::size_t r = 0; r < rank; ++r) {
            double term = model.weights[r];
            for (std::size_t k = 0; k < d; ++k) term *= model.factors[k](coords[k], r);
            value += term;
        }
        data_term += static_cast<double>(tensor.counts()[e]) * std::log(value + log_shift);
    }
    double mass = 0.0;
    for (double w : model.weights) mass += w;
    return data_term - mass;
}

KruskalModel init_model(const Shape& shape, std::size_t rank, std::uint64_t seed,
                        double total_count) {
    if (rank < 1) throw ArgumentError("rank must be >= 1");
    SeededRng rng(seed);
    KruskalModel model{shape, rank, std::vector<double>(rank, total_count / static_cast<double>(rank)), {}};
    model.factors.reserve(shape.ndim());
    for (std::size_t k = 0; k < shape.ndim(); ++k) {
        Matrix factor(shape.dim(k), rank);
        for (std::size_t i = 0; i < factor.rows(); ++i)
            for (std::size_t r = 0; r < rank; ++r) factor(i, r) = rng.uniform01();
        model.factors.push_back(std::move(factor));
    }
    // Normalize columns without touching the weights: the initial mass is
    // fixed to the data mass by construction.
    for (std::size_t k = 0; k < shape.ndim(); ++k) {
        Matrix& factor = model.factors[k];
        for (std::size_t r = 0; r < rank; ++r) {
            double column_sum = 0.0;
            for (std::size_t i = 0; i < factor.rows(); ++i) column_sum += factor(i, r);
            for (std::size_t i = 0; i < factor.rows(); ++i) factor(i, r) /= column_sum;
        }
    }
    return model;
}

namespace {

bool finite_model(const KruskalModel& model) {
    for (double w : model.weights)
        if (!std::isfinite(w)) return false;
    for (const Matrix& factor : model.factors)
        for (double v : factor.data())
            if (!std::isfinite(v)) return false;
    return true;
}

/// Khatri-Rao rows over the sparse support: Pi(e, r) is the product of the
/// non-target factors' entries at nonzero e. Recomputed once per mode pass;
/// the inner multiplicative steps only change the target factor.
void compute_pi(const SparseCountTensor& tensor, const KruskalModel& model,
                std::size_t target_mode, std::vector<double>& pi) {
    const std::size_t d = model.ndim();
    const std::size_t rank = model.rank;
    pi.assign(tensor.nnz() * rank, 1.0);
    for (std::size_t k = 0; k < d; ++k) {
        if (k == target_mode) continue;
        const Matrix& factor = model.factors[k];
        for (std::size_t e = 0; e < tensor.nnz(); ++e) {
            const Coord row = tensor.coordinates()[e * d + k];
            const double* factor_row = factor.row(row);
            double* pi_row = pi.data() + e * rank;
            for (std::size_t r = 0; r < rank; ++r) pi_row[r] *= factor_row[r];
        }
    }
}

}  // namespace

FitResult fit(const SparseCountTensor& tensor, const FitConfig& config) {
    if (tensor.nnz() == 0) throw ArgumentError("cannot fit an empty count tensor");
    if (config.rank < 1) throw ArgumentError("rank must be >= 1");
    if (!(config.kkt_tol > 0) || !(config.log_shift > 0))
        throw ArgumentError("tolerances must be positive");

    const Shape& shape = tensor.shape();
    const std::size_t d = shape.ndim();
    const std::size_t rank = config.rank;

    KruskalModel model =
        init_model(shape, rank, config.rng_seed, static_cast<double>(tensor.total_count()));

    FitResult result;
    std::vector<double> pi;
    std::vector<double> kkt_by_mode(d, 0.0);

    int outer = 0;
    for (; outer < config.max_outer_iters; ++outer) {
        bool all_modes_stationary = true;
        for (std::size_t mode = 0; mode < d; ++mode) {
            Matrix& factor = model.factors[mode];
            const std::size_t dim = factor.rows();

            // Absorb the weights into the active mode so the update is a
            // plain non-negative multiplicative step.
            for (std::size_t r = 0; r < rank; ++r)
                for (std::size_t i = 0; i < dim; ++i) factor(i, r) *= model.weights[r];
            std::fill(model.weights.begin(), model.weights.end(), 1.0);

            compute_pi(tensor, model, mode, pi);

            Matrix phi(dim, rank);
            double kkt_violation = 0.0;
            for (int inner = 0; inner < config.max_inner_iters; ++inner) {
                std::fill(phi.data().begin(), phi.data().end(), 0.0);
                for (std::size_t e = 0; e < tensor.nnz(); ++e) {
                    const Coord row = tensor.coordinates()[e * d + mode];
                    const double* pi_row = pi.data() + e * rank;
                    const double* factor_row = factor.row(row);
                    double value = 0.0;
                    for (std::size_t r = 0; r < rank; ++r) value += factor_row[r] * pi_row[r];
                    const double scale = static_cast<double>(tensor.counts()[e]) /
                                         std::max(value, config.log_shift);
                    double* phi_row = phi.row(row);
                    for (std::size_t r = 0; r < rank; ++r) phi_row[r] += scale * pi_row[r];
                }

                kkt_violation = 0.0;
                for (std::size_t j = 0; j < dim * rank; ++j) {
                    const double gap =
                        std::abs(std::min(factor.data()[j], 1.0 - phi.data()[j]));
                    kkt_violation = std::max(kkt_violation, gap);
                }
                if (kkt_violation < config.kkt_tol) break;

                all_modes_stationary = false;
                for (std::size_t j = 0; j < dim * rank; ++j)
                    factor.data()[j] *= phi.data()[j];
            }
            kkt_by_mode[mode] = kkt_violation;

            // Pull the column masses back out into the weights.
            for (std::size_t r = 0; r < rank; ++r) {
                double column_sum = 0.0;
                for (std::size_t i = 0; i < dim; ++i) column_sum += factor(i, r);
                if (column_sum < config.min_weight) {
                    // Dead component: park it at the floor with a flat column.
                    model.weights[r] = config.min_weight;
                    for (std::size_t i = 0; i < dim; ++i)
                        factor(i, r) = 1.0 / static_cast<double>(dim);
                    continue;
                }
                model.weights[r] = column_sum;
                for (std::size_t i = 0; i < dim; ++i) factor(i, r) /= column_sum;
            }
        }

        if (!finite_model(model))
            throw NumericalError("non-finite factor values at outer iteration " +
                                     std::to_string(outer),
                                 outer);
        result.loglik_trace.push_back(log_likelihood(model, tensor, config.log_shift));

        if (all_modes_stationary) {
            result.converged = true;
            ++outer;
            break;
        }
    }

    result.model = std::move(model);
    result.outer_iterations = outer;
    result.final_kkt_violation = *std::max_element(kkt_by_mode.begin(), kkt_by_mode.end());
    return result;
}

}  // namespace ptc
