#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ptc/closed_form.hpp"
#include "ptc/samplers.hpp"
#include "ptc/special.hpp"

using namespace ptc;

TEST_CASE("uniform sampler support and determinism") {
    const auto spec = DistributionSpec::uniform({{0.0, 1.0}, {0.0, 1.0}});
    const Matrix a = sample(spec, 500, 11);
    const Matrix b = sample(spec, 500, 11);
    CHECK(a == b);
    for (const double v : a.data()) {
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
    CHECK(!(a == sample(spec, 500, 12)));
}

TEST_CASE("gaussian sampler moments") {
    const auto spec = DistributionSpec::gaussian({0.0, 0.0}, Matrix::identity(2));
    const std::int64_t s = 100000;
    const Matrix samples = sample(spec, s, 21);
    const double tol = 5.0 / std::sqrt(static_cast<double>(s));

    for (std::size_t k = 0; k < 2; ++k) {
        double mean = 0.0;
        for (std::size_t i = 0; i < samples.rows(); ++i) mean += samples(i, k);
        mean /= static_cast<double>(s);
        CHECK(std::abs(mean) < tol);
    }
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t j = 0; j <= k; ++j) {
            double cov = 0.0;
            for (std::size_t i = 0; i < samples.rows(); ++i)
                cov += samples(i, k) * samples(i, j);
            cov /= static_cast<double>(s);
            CHECK(std::abs(cov - (k == j ? 1.0 : 0.0)) < tol);
        }
}

TEST_CASE("correlated gaussian sampler moments") {
    const std::size_t d = 3;
    Matrix sigma(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) sigma(i, j) = i == j ? 1.0 : 0.5;
    const auto spec = DistributionSpec::gaussian(std::vector<double>(d, 0.0), sigma);
    const std::int64_t s = 100000;
    const Matrix samples = sample(spec, s, 33);
    const double tol = 5.0 / std::sqrt(static_cast<double>(s));
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t j = 0; j <= k; ++j) {
            double cov = 0.0;
            for (std::size_t i = 0; i < samples.rows(); ++i)
                cov += samples(i, k) * samples(i, j);
            cov /= static_cast<double>(s);
            CHECK(std::abs(cov - sigma(k, j)) < tol);
        }
}

TEST_CASE("student-t sampler matches its CDF") {
    for (const double dof : {1.0, 5.0}) {
        const auto spec = DistributionSpec::student_t(1, dof);
        const std::int64_t s = 20000;
        const Matrix samples = sample(spec, s, 7);
        std::vector<double> sorted(samples.data());
        std::sort(sorted.begin(), sorted.end());
        // empirical CDF against the Beta-function CDF at a few quantiles
        for (const double x : {-3.0, -1.0, 0.0, 0.5, 1.0, 3.0}) {
            const auto below = std::lower_bound(sorted.begin(), sorted.end(), x);
            const double empirical =
                static_cast<double>(below - sorted.begin()) / static_cast<double>(s);
            CHECK(std::abs(empirical - student_t_cdf(x, dof)) < 0.02);
        }
    }
}

TEST_CASE("student-t cdf closed values") {
    CHECK(student_t_cdf(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(student_t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-12));  // Cauchy quartile
    CHECK(student_t_cdf(-1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
}

TEST_CASE("digamma spot values") {
    const double gamma = 0.5772156649015329;
    CHECK(digamma(1.0) == doctest::Approx(-gamma).epsilon(1e-12));
    CHECK(digamma(2.0) == doctest::Approx(1.0 - gamma).epsilon(1e-12));
    CHECK(digamma(0.5) == doctest::Approx(-gamma - 2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("mixture sampler label frequencies") {
    const auto spec = equidistant_mixture(3, 2, 10.0);
    const std::int64_t s = 100000;
    const Matrix samples = sample(spec, s, 2);
    // classify by nearest mode; modes are 10 apart so misclassification is nil
    std::vector<std::int64_t> counts(3, 0);
    for (std::size_t i = 0; i < samples.rows(); ++i) {
        double best = 1e300;
        std::size_t label = 0;
        for (std::size_t c = 0; c < 3; ++c) {
            double dist2 = 0.0;
            for (std::size_t k = 0; k < 2; ++k) {
                const double diff = samples(i, k) - spec.components[c].mean[k];
                dist2 += diff * diff;
            }
            if (dist2 < best) {
                best = dist2;
                label = c;
            }
        }
        ++counts[label];
    }
    const double expected = static_cast<double>(s) / 3.0;
    double chi2 = 0.0;
    for (const auto count : counts)
        chi2 += (count - expected) * (count - expected) / expected;
    CHECK(chi2 < 13.8155);  // chi-square(2) 0.999 quantile
}

TEST_CASE("equidistant_mixture geometry") {
    SUBCASE("two modes on a line") {
        const auto spec = equidistant_mixture(2, 1, 10.0);
        CHECK(spec.components[0].mean[0] == doctest::Approx(0.0));
        CHECK(spec.components[1].mean[0] == doctest::Approx(10.0));
    }
    SUBCASE("equilateral triangle") {
        const auto spec = equidistant_mixture(3, 2, 10.0);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = a + 1; b < 3; ++b) {
                double dist2 = 0.0;
                for (std::size_t k = 0; k < 2; ++k) {
                    const double diff =
                        spec.components[a].mean[k] - spec.components[b].mean[k];
                    dist2 += diff * diff;
                }
                CHECK(std::sqrt(dist2) == doctest::Approx(10.0).epsilon(1e-9));
            }
    }
    SUBCASE("dimension constraint") {
        CHECK_THROWS_AS(equidistant_mixture(5, 3, 10.0), ArgumentError);
    }
    SUBCASE("pairwise distances in higher dimension") {
        const auto spec = equidistant_mixture(4, 6, 2.5);
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = a + 1; b < 4; ++b) {
                double dist2 = 0.0;
                for (std::size_t k = 0; k < 6; ++k) {
                    const double diff =
                        spec.components[a].mean[k] - spec.components[b].mean[k];
                    dist2 += diff * diff;
                }
                CHECK(std::sqrt(dist2) == doctest::Approx(2.5).epsilon(1e-9));
            }
    }
}

TEST_CASE("true_entropy") {
    const double e2 = std::exp(2.0);
    CHECK(*true_entropy(DistributionSpec::uniform(
              std::vector<std::pair<double, double>>(5, {0.0, e2}))) ==
          doctest::Approx(10.0).epsilon(1e-12));
    CHECK(*true_entropy(DistributionSpec::gaussian(std::vector<double>(5, 0.0),
                                                   Matrix::identity(5))) ==
          doctest::Approx(7.094692666023363).epsilon(1e-9));
    CHECK(!true_entropy(equidistant_mixture(3, 2, 10.0)).has_value());

    // one-component "mixture" is just a gaussian
    const auto single = DistributionSpec::gaussian_mixture(
        {GaussianComponent{{0.0, 0.0}, Matrix::identity(2)}}, {1.0});
    CHECK(*true_entropy(single) ==
          doctest::Approx(gaussian_entropy(Matrix::identity(2))).epsilon(1e-12));
}

TEST_CASE("student-t entropy closed form") {
    CHECK(student_t_entropy(1.0) ==
          doctest::Approx(std::log(4.0 * M_PI)).epsilon(1e-12));
    // approaches the standard normal entropy for large dof
    CHECK(student_t_entropy(1e6) == doctest::Approx(1.4189385332).epsilon(1e-3));
    const auto spec = DistributionSpec::student_t(5, 1.0);
    CHECK(*true_entropy(spec) == doctest::Approx(5.0 * std::log(4.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("product margins") {
    const auto uniform = DistributionSpec::uniform({{0.0, 2.0}});
    REQUIRE(product_margins(uniform).has_value());
    const auto gaussian =
        DistributionSpec::gaussian({1.0, 2.0}, Matrix::identity(2));
    REQUIRE(product_margins(gaussian).has_value());
    CHECK((*product_margins(gaussian))[0].mean == 1.0);

    Matrix correlated(2, 2);
    correlated(0, 0) = correlated(1, 1) = 1.0;
    correlated(0, 1) = correlated(1, 0) = 0.5;
    CHECK(!product_margins(DistributionSpec::gaussian({0.0, 0.0}, correlated)));
    CHECK(!product_margins(equidistant_mixture(2, 1)));
}

TEST_CASE("invalid specs") {
    CHECK_THROWS_AS(DistributionSpec::uniform({{1.0, 1.0}}), ArgumentError);
    CHECK_THROWS_AS(DistributionSpec::student_t(0, 1.0), ArgumentError);
    CHECK_THROWS_AS(DistributionSpec::student_t(2, 0.0), ArgumentError);
    Matrix not_spd(2, 2);
    not_spd(0, 1) = not_spd(1, 0) = 2.0;
    not_spd(0, 0) = not_spd(1, 1) = 1.0;
    CHECK_THROWS_AS(DistributionSpec::gaussian({0.0, 0.0}, not_spd), ArgumentError);
    CHECK_THROWS_AS(sample(DistributionSpec::uniform({{0.0, 1.0}}), 0, 1), ArgumentError);
}
