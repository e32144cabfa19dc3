#pragma once

#include <vector>

#include "ptc/kruskal.hpp"
#include "ptc/rng.hpp"

namespace ptc::testing {

/// Random positive column-stochastic model with uniform(0,1)-derived
/// factors and weights; deterministic per seed.
inline KruskalModel seeded_model(Shape shape, std::size_t rank, std::uint64_t seed) {
    SeededRng rng(seed);
    KruskalModel model{std::move(shape), rank, std::vector<double>(rank), {}};
    for (std::size_t r = 0; r < rank; ++r) model.weights[r] = 1.0 + 10.0 * rng.uniform01();
    for (std::size_t k = 0; k < model.shape.ndim(); ++k) {
        Matrix factor(model.shape.dim(k), rank);
        for (std::size_t i = 0; i < factor.rows(); ++i)
            for (std::size_t r = 0; r < rank; ++r)
                factor(i, r) = 0.05 + rng.uniform01();
        for (std::size_t r = 0; r < rank; ++r) {
            double sum = 0.0;
            for (std::size_t i = 0; i < factor.rows(); ++i) sum += factor(i, r);
            for (std::size_t i = 0; i < factor.rows(); ++i) factor(i, r) /= sum;
        }
        model.factors.push_back(std::move(factor));
    }
    return model;
}

/// Dense tensor reconstruction by explicit outer products; the brute-force
/// oracle for kruskal_entry and everything built on it.
inline std::vector<double> dense_reconstruction(const KruskalModel& model) {
    std::vector<double> dense(model.shape.size(), 0.0);
    for (std::size_t r = 0; r < model.rank; ++r) {
        for (Index linear = 0; linear < model.shape.size(); ++linear) {
            const MultiIndex index = delinearize(linear, model.shape);
            double term = model.weights[r];
            for (std::size_t k = 0; k < model.ndim(); ++k)
                term *= model.factors[k](index[k], r);
            dense[linear] += term;
        }
    }
    return dense;
}

}  // namespace ptc::testing
