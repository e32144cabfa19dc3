#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptc/matrix.hpp"
#include "ptc/mean_measure.hpp"

namespace ptc {

struct GaussianComponent {
    std::vector<double> mean;
    Matrix cov;
};

/// Description of a sampling distribution plus whatever ground truth it
/// carries (closed-form entropy, product margins for mean measures).
struct DistributionSpec {
    enum class Family { Uniform, Gaussian, StudentT, GaussianMixture };
    Family family = Family::Uniform;
    std::size_t dim = 1;

    std::vector<std::pair<double, double>> box;  // uniform support
    std::vector<double> mean;                    // gaussian
    Matrix cov;                                  // gaussian
    double dof = 1.0;                            // student-t (independent coords)
    std::vector<GaussianComponent> components;   // mixture
    std::vector<double> weights;                 // mixture, positive, sums to 1

    static DistributionSpec uniform(std::vector<std::pair<double, double>> box);
    static DistributionSpec gaussian(std::vector<double> mean, Matrix cov);
    static DistributionSpec student_t(std::size_t dim, double dof);
    static DistributionSpec gaussian_mixture(std::vector<GaussianComponent> components,
                                             std::vector<double> weights);

    std::string family_name() const;
};

/// Draws s rows; deterministic given (spec, s, seed) on every platform.
Matrix sample(const DistributionSpec& spec, std::int64_t s, std::uint64_t seed);

/// Equal-weight Gaussian mixture whose m component means sit at the
/// vertices of a regular (m-1)-simplex with edge length `separation`,
/// embedded in the first m-1 coordinates of R^d (canonical embedding).
/// Requires d >= m - 1.
DistributionSpec equidistant_mixture(std::size_t components, std::size_t dim,
                                     double separation = 10.0,
                                     const Matrix* component_cov = nullptr);

/// Closed-form differential entropy where one exists; nullopt for mixtures
/// with two or more components.
std::optional<double> true_entropy(const DistributionSpec& spec);

/// Product-form margins for true_mean_measure; nullopt when coordinates are
/// dependent (correlated gaussian, mixtures).
std::optional<std::vector<Margin>> product_margins(const DistributionSpec& spec);

}  // namespace ptc
