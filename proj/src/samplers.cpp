#include "ptc/samplers.hpp"

#include <cmath>
#include <numeric>

#include "ptc/closed_form.hpp"
#include "ptc/error.hpp"
#include "ptc/rng.hpp"

namespace ptc {

DistributionSpec DistributionSpec::uniform(std::vector<std::pair<double, double>> box) {
    if (box.empty()) throw ArgumentError("uniform spec needs a non-empty box");
    for (const auto& [a, b] : box)
        if (!(b > a)) throw ArgumentError("uniform box interval is empty");
    DistributionSpec spec;
    spec.family = Family::Uniform;
    spec.dim = box.size();
    spec.box = std::move(box);
    return spec;
}

DistributionSpec DistributionSpec::gaussian(std::vector<double> mean, Matrix cov) {
    if (mean.empty()) throw ArgumentError("gaussian spec needs a non-empty mean");
    if (cov.rows() != mean.size() || cov.cols() != mean.size())
        throw ArgumentError("covariance shape does not match the mean");
    if (!cholesky(cov)) throw ArgumentError("covariance is not symmetric positive definite");
    DistributionSpec spec;
    spec.family = Family::Gaussian;
    spec.dim = mean.size();
    spec.mean = std::move(mean);
    spec.cov = std::move(cov);
    return spec;
}

DistributionSpec DistributionSpec::student_t(std::size_t dim, double dof) {
    if (dim < 1) throw ArgumentError("student-t spec needs dim >= 1");
    if (!(dof > 0)) throw ArgumentError("student-t spec needs dof > 0");
    DistributionSpec spec;
    spec.family = Family::StudentT;
    spec.dim = dim;
    spec.dof = dof;
    return spec;
}

DistributionSpec DistributionSpec::gaussian_mixture(
    std::vector<GaussianComponent> components, std::vector<double> weights) {
    if (components.empty()) throw ArgumentError("mixture needs at least one component");
    if (weights.size() != components.size())
        throw ArgumentError("mixture needs one weight per component");
    const std::size_t d = components.front().mean.size();
    double total = 0.0;
    for (const double w : weights) {
        if (!(w > 0)) throw ArgumentError("mixture weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ArgumentError("mixture weights must sum to 1");
    for (const auto& component : components) {
        if (component.mean.size() != d)
            throw ArgumentError("mixture component dimensions disagree");
        if (component.cov.rows() != d || component.cov.cols() != d)
            throw ArgumentError("mixture component covariance shape mismatch");
        if (!cholesky(component.cov))
            throw ArgumentError("mixture component covariance is not SPD");
    }
    DistributionSpec spec;
    spec.family = Family::GaussianMixture;
    spec.dim = d;
    spec.components = std::move(components);
    spec.weights = std::move(weights);
    return spec;
}

std::string DistributionSpec::family_name() const {
    switch (family) {
        case Family::Uniform: return "uniform";
        case Family::Gaussian: return "gaussian";
        case Family::StudentT: return "student_t";
        case Family::GaussianMixture: return "gaussian_mixture";
    }
    return "unknown";
}

namespace {

void draw_gaussian_row(SeededRng& rng, const std::vector<double>& mean,
                       const Matrix& chol, double* out) {
    const std::size_t d = mean.size();
    std::vector<double> z(d);
    for (std::size_t k = 0; k < d; ++k) z[k] = rng.normal();
    for (std::size_t k = 0; k < d; ++k) {
        double value = mean[k];
        for (std::size_t j = 0; j <= k; ++j) value += chol(k, j) * z[j];
        out[k] = value;
    }
}

}  // namespace

Matrix sample(const DistributionSpec& spec, std::int64_t s, std::uint64_t seed) {
    if (s < 1) throw ArgumentError("sample count must be >= 1");
    SeededRng rng(seed);
    Matrix samples(static_cast<std::size_t>(s), spec.dim);

    switch (spec.family) {
        case DistributionSpec::Family::Uniform: {
            for (std::size_t i = 0; i < samples.rows(); ++i)
                for (std::size_t k = 0; k < spec.dim; ++k) {
                    const auto& [a, b] = spec.box[k];
                    samples(i, k) = a + (b - a) * rng.uniform01();
                }
            break;
        }
        case DistributionSpec::Family::Gaussian: {
            const Matrix chol = *cholesky(spec.cov);
            for (std::size_t i = 0; i < samples.rows(); ++i)
                draw_gaussian_row(rng, spec.mean, chol, samples.row(i));
            break;
        }
        case DistributionSpec::Family::StudentT: {
            for (std::size_t i = 0; i < samples.rows(); ++i)
                for (std::size_t k = 0; k < spec.dim; ++k)
                    samples(i, k) = rng.student_t(spec.dof);
            break;
        }
        case DistributionSpec::Family::GaussianMixture: {
            std::vector<Matrix> chols;
            chols.reserve(spec.components.size());
            for (const auto& component : spec.components)
                chols.push_back(*cholesky(component.cov));
            std::vector<double> cumulative(spec.weights.size());
            std::partial_sum(spec.weights.begin(), spec.weights.end(), cumulative.begin());
            cumulative.back() = 1.0;
            for (std::size_t i = 0; i < samples.rows(); ++i) {
                const double u = rng.uniform01();
                std::size_t label = 0;
                while (u >= cumulative[label]) ++label;
                draw_gaussian_row(rng, spec.components[label].mean, chols[label],
                                  samples.row(i));
            }
            break;
        }
    }
    return samples;
}

DistributionSpec equidistant_mixture(std::size_t components, std::size_t dim,
                                     double separation, const Matrix* component_cov) {
    if (components < 1) throw ArgumentError("mixture needs at least one component");
    if (dim + 1 < components)
        throw ArgumentError("at most d+1 equidistant points fit in d dimensions: need dim >= " +
                            std::to_string(components - 1));
    if (!(separation > 0)) throw ArgumentError("separation must be positive");

    // Unit-edge regular simplex built one vertex at a time: each new vertex
    // sits above the centroid of the previous ones along a fresh axis.
    std::vector<std::vector<double>> vertices(components, std::vector<double>(dim, 0.0));
    for (std::size_t v = 1; v < components; ++v) {
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t u = 0; u < v; ++u)
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += vertices[u][k] / v;
        double r2 = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            const double diff = vertices[0][k] - centroid[k];
            r2 += diff * diff;
        }
        vertices[v] = centroid;
        vertices[v][v - 1] += std::sqrt(1.0 - r2);
    }

    Matrix cov = component_cov ? *component_cov : Matrix::identity(dim);
    std::vector<GaussianComponent> parts;
    parts.reserve(components);
    for (auto& vertex : vertices) {
        for (double& c : vertex) c *= separation;
        parts.push_back(GaussianComponent{std::move(vertex), cov});
    }
    return DistributionSpec::gaussian_mixture(
        std::move(parts),
        std::vector<double>(components, 1.0 / static_cast<double>(components)));
}

std::optional<double> true_entropy(const DistributionSpec& spec) {
    switch (spec.family) {
        case DistributionSpec::Family::Uniform:
            return uniform_entropy(spec.box);
        case DistributionSpec::Family::Gaussian:
            return gaussian_entropy(spec.cov);
        case DistributionSpec::Family::StudentT:
            return static_cast<double>(spec.dim) * student_t_entropy(spec.dof);
        case DistributionSpec::Family::GaussianMixture:
            if (spec.components.size() == 1)
                return gaussian_entropy(spec.components.front().cov);
            return std::nullopt;
    }
    return std::nullopt;
}

std::optional<std::vector<Margin>> product_margins(const DistributionSpec& spec) {
    std::vector<Margin> margins;
    switch (spec.family) {
        case DistributionSpec::Family::Uniform:
            for (const auto& [a, b] : spec.box) margins.push_back(Margin::uniform(a, b));
            return margins;
        case DistributionSpec::Family::Gaussian: {
            for (std::size_t i = 0; i < spec.dim; ++i)
                for (std::size_t j = 0; j < spec.dim; ++j)
                    if (i != j && spec.cov(i, j) != 0.0) return std::nullopt;
            for (std::size_t k = 0; k < spec.dim; ++k)
                margins.push_back(Margin::normal(spec.mean[k], std::sqrt(spec.cov(k, k))));
            return margins;
        }
        case DistributionSpec::Family::StudentT:
            for (std::size_t k = 0; k < spec.dim; ++k)
                margins.push_back(Margin::student_t(spec.dof));
            return margins;
        case DistributionSpec::Family::GaussianMixture:
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace ptc
