#pragma once

#include <vector>

#include "ptc/matrix.hpp"
#include "ptc/shape.hpp"

namespace ptc {

/// Kruskal (CP) model: weights lambda_1..lambda_R and one n_i x R factor
/// matrix per mode, factor columns normalized to unit 1-norm so that the
/// represented tensor sum equals sum(lambda). The dense tensor is never
/// materialized; entries are evaluated on demand.
struct KruskalModel {
    Shape shape;
    std::size_t rank = 0;
    std::vector<double> weights;   // size R, all > 0
    std::vector<Matrix> factors;   // d matrices, factors[k] is n_k x R

    std::size_t ndim() const { return shape.ndim(); }
};

/// Entry m_i = sum_r lambda_r * prod_k A_k(i_k, r); O(R*(d+1)) arithmetic.
double kruskal_entry(const KruskalModel& model, const MultiIndex& index);

/// Total mass |M|_1 = sum_r lambda_r. Verifies the column-stochastic
/// invariant (each column 1-norm within 1e-9 of 1) before trusting it.
double kruskal_total_mass(const KruskalModel& model);

/// Rescales every factor column to unit 1-norm, absorbing the column sums
/// into the weights; the represented tensor is unchanged entrywise.
/// An all-zero column is a degenerate model and raises InvariantError.
KruskalModel normalize_model(KruskalModel model);

}  // namespace ptc
