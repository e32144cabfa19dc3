#include <doctest.h>

#include <cmath>
#include <map>

#include "helpers.hpp"
#include "ptc/cp_apr.hpp"

using namespace ptc;
using ptc::testing::seeded_model;

namespace {

SparseCountTensor make_tensor(Shape shape, const std::map<Index, std::int64_t>& entries) {
    return SparseCountTensor(std::move(shape), entries);
}

/// Seeded random sparse count tensor (about 40% fill, counts 1..9).
SparseCountTensor random_tensor(Shape shape, std::uint64_t seed) {
    SeededRng rng(seed);
    std::map<Index, std::int64_t> entries;
    for (Index l = 0; l < shape.size(); ++l)
        if (rng.uniform01() < 0.4)
            entries[l] = 1 + static_cast<std::int64_t>(rng.below(9));
    if (entries.empty()) entries[0] = 1;
    return SparseCountTensor(std::move(shape), entries);
}

/// Closed-form rank-1 Poisson MLE: weight = total count, factor k = mode-k
/// marginal sums / total.
KruskalModel rank1_mle(const SparseCountTensor& tensor) {
    const Shape& shape = tensor.shape();
    const double total = static_cast<double>(tensor.total_count());
    KruskalModel model{shape, 1, {total}, {}};
    for (std::size_t k = 0; k < shape.ndim(); ++k) {
        Matrix factor(shape.dim(k), 1);
        for (std::size_t e = 0; e < tensor.nnz(); ++e)
            factor(tensor.coordinates()[e * shape.ndim() + k], 0) +=
                static_cast<double>(tensor.counts()[e]);
        for (std::size_t i = 0; i < factor.rows(); ++i) factor(i, 0) /= total;
        model.factors.push_back(std::move(factor));
    }
    return model;
}

}  // namespace

TEST_CASE("log_likelihood closed cases") {
    SUBCASE("single unit count at a unit-mass model") {
        const auto t = make_tensor(Shape({1}), {{0, 1}});
        KruskalModel model{Shape({1}), 1, {1.0}, {Matrix(1, 1, 1.0)}};
        CHECK(log_likelihood(model, t) == doctest::Approx(-1.0).epsilon(1e-9));
    }
    SUBCASE("empty tensor leaves only the mass penalty") {
        const auto t = make_tensor(Shape({2, 2}), {});
        const KruskalModel model = seeded_model(Shape({2, 2}), 2, 5);
        double mass = model.weights[0] + model.weights[1];
        CHECK(log_likelihood(model, t) == doctest::Approx(-mass).epsilon(1e-12));
    }
    SUBCASE("matches the dense brute-force sum") {
        const auto t = random_tensor(Shape({3, 4, 5}), 2);
        const KruskalModel model = seeded_model(Shape({3, 4, 5}), 2, 6);
        double oracle = 0.0;
        for (Index l = 0; l < t.shape().size(); ++l) {
            const MultiIndex index = delinearize(l, t.shape());
            const double m = kruskal_entry(model, index);
            oracle += static_cast<double>(t.at(index)) * std::log(m + 1e-10) - m;
        }
        CHECK(log_likelihood(model, t) == doctest::Approx(oracle).epsilon(1e-10));
    }
    SUBCASE("shape mismatch") {
        const auto t = make_tensor(Shape({2, 2}), {{0, 1}});
        const KruskalModel model = seeded_model(Shape({2, 3}), 1, 1);
        CHECK_THROWS_AS(log_likelihood(model, t), ArgumentError);
    }
}

TEST_CASE("init_model") {
    const Shape shape({4, 5});
    const KruskalModel a = init_model(shape, 3, 99, 42.0);
    const KruskalModel b = init_model(shape, 3, 99, 42.0);
    CHECK(a.weights == b.weights);
    for (std::size_t k = 0; k < 2; ++k) CHECK(a.factors[k] == b.factors[k]);

    double mass = 0.0;
    for (const double w : a.weights) mass += w;
    CHECK(mass == doctest::Approx(42.0).epsilon(1e-12));
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t r = 0; r < 3; ++r) {
            double sum = 0.0;
            for (std::size_t i = 0; i < a.factors[k].rows(); ++i) sum += a.factors[k](i, r);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("rank-1 fit equals the marginal MLE") {
    SUBCASE("all-ones 2x2") {
        const auto t = make_tensor(Shape({2, 2}), {{0, 1}, {1, 1}, {2, 1}, {3, 1}});
        FitConfig config;
        config.rank = 1;
        const FitResult result = fit(t, config);
        CHECK(result.model.weights[0] == doctest::Approx(4.0).epsilon(1e-6));
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t i = 0; i < 2; ++i)
                CHECK(result.model.factors[k](i, 0) == doctest::Approx(0.5).epsilon(1e-6));
    }
    SUBCASE("diagonal counts") {
        const auto t = make_tensor(Shape({2, 2}), {{0, 2}, {3, 2}});
        FitConfig config;
        config.rank = 1;
        const FitResult result = fit(t, config);
        CHECK(result.model.weights[0] == doctest::Approx(4.0).epsilon(1e-6));
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t i = 0; i < 2; ++i)
                CHECK(result.model.factors[k](i, 0) == doctest::Approx(0.5).epsilon(1e-6));
    }
    SUBCASE("random tensors up to (5,5,5)") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto t = random_tensor(Shape({5, 5, 5}), 100 + seed);
            FitConfig config;
            config.rank = 1;
            config.rng_seed = seed;
            const FitResult result = fit(t, config);
            const KruskalModel oracle = rank1_mle(t);
            CHECK(result.model.weights[0] ==
                  doctest::Approx(oracle.weights[0]).epsilon(1e-6));
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t i = 0; i < 5; ++i)
                    CHECK(result.model.factors[k](i, 0) ==
                          doctest::Approx(oracle.factors[k](i, 0)).scale(1.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("rank-2 likelihood dominates rank-1 on the diagonal tensor") {
    const auto t = make_tensor(Shape({2, 2}), {{0, 2}, {3, 2}});
    FitConfig config;
    config.rank = 1;
    const FitResult rank1 = fit(t, config);
    config.rank = 2;
    const FitResult rank2 = fit(t, config);
    CHECK(rank2.loglik_trace.back() >= rank1.loglik_trace.back() - 1e-8);
    // the diagonal tensor is exactly rank 2: expect a real improvement
    CHECK(rank2.loglik_trace.back() > rank1.loglik_trace.back() + 0.5);
}

TEST_CASE("fit invariants on seeded random tensors") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto t = random_tensor(Shape({4, 3, 5}), 50 + seed);
        FitConfig config;
        config.rank = 1 + seed % 3;
        config.rng_seed = seed;
        const FitResult result = fit(t, config);

        for (std::size_t i = 1; i < result.loglik_trace.size(); ++i)
            CHECK(result.loglik_trace[i] >= result.loglik_trace[i - 1] - 1e-8);

        for (const Matrix& factor : result.model.factors)
            for (const double v : factor.data()) CHECK(v >= 0.0);
        for (const double w : result.model.weights) CHECK(w > 0.0);

        if (result.converged) {
            CHECK(kruskal_total_mass(result.model) ==
                  doctest::Approx(static_cast<double>(t.total_count())).epsilon(1e-6));
        }
    }
}

TEST_CASE("fit is deterministic") {
    const auto t = random_tensor(Shape({4, 4}), 77);
    FitConfig config;
    config.rank = 2;
    config.rng_seed = 123;
    const FitResult a = fit(t, config);
    const FitResult b = fit(t, config);
    CHECK(a.model.weights == b.model.weights);
    for (std::size_t k = 0; k < 2; ++k) CHECK(a.model.factors[k] == b.model.factors[k]);
    CHECK(a.loglik_trace == b.loglik_trace);
    CHECK(a.outer_iterations == b.outer_iterations);
}

TEST_CASE("fit rejects an empty tensor") {
    const auto t = make_tensor(Shape({2, 2}), {});
    FitConfig config;
    CHECK_THROWS_AS(fit(t, config), ArgumentError);
}
