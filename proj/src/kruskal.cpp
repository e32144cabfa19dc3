#include "ptc/kruskal.hpp"

#include <cmath>
#include <string>

namespace ptc {

namespace {

void check_index(const KruskalModel& model, const MultiIndex& index) {
    if (index.size() != model.ndim())
        throw IndexError("multi-index rank mismatch");
    for (std::size_t k = 0; k < index.size(); ++k)
        if (index[k] >= model.shape.dim(k))
            throw IndexError("coordinate out of range for mode " + std::to_string(k));
}

}  // namespace

double kruskal_entry(const KruskalModel& model, const MultiIndex& index) {
    check_index(model, index);
    double value = 0.0;
    for (std::size_t r = 0; r < model.rank; ++r) {
        double term = model.weights[r];
        for (std::size_t k = 0; k < model.ndim(); ++k)
            term *= model.factors[k](index[k], r);
        value += term;
    }
    return value;
}

double kruskal_total_mass(const KruskalModel& model) {
    for (std::size_t k = 0; k < model.ndim(); ++k) {
        for (std::size_t r = 0; r < model.rank; ++r) {
            double column_sum = 0.0;
            for (std::size_t i = 0; i < model.factors[k].rows(); ++i)
                column_sum += std::abs(model.factors[k](i, r));
            if (std::abs(column_sum - 1.0) > 1e-9)
                throw InvariantError("factor column " + std::to_string(r) + " of mode " +
                                     std::to_string(k) + " is not stochastic (1-norm " +
                                     std::to_string(column_sum) + ")");
        }
    }
    double mass = 0.0;
    for (double w : model.weights) mass += w;
    return mass;
}

KruskalModel normalize_model(KruskalModel model) {
    for (std::size_t k = 0; k < model.ndim(); ++k) {
        Matrix& factor = model.factors[k];
        for (std::size_t r = 0; r < model.rank; ++r) {
            double column_sum = 0.0;
            for (std::size_t i = 0; i < factor.rows(); ++i)
                column_sum += std::abs(factor(i, r));
            if (column_sum == 0.0)
                throw InvariantError("all-zero factor column " + std::to_string(r) +
                                     " in mode " + std::to_string(k) + ": degenerate model");
            for (std::size_t i = 0; i < factor.rows(); ++i)
                factor(i, r) /= column_sum;
            model.weights[r] *= column_sum;
        }
    }
    return model;
}

}  // namespace ptc
