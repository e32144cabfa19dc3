#include "ptc/closed_form.hpp"

#include <cmath>

#include "ptc/error.hpp"
#include "ptc/special.hpp"

namespace ptc {

std::optional<Matrix> cholesky(const Matrix& spd) {
    const std::size_t n = spd.rows();
    if (n == 0 || spd.cols() != n) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(spd(i, j) - spd(j, i)) > 1e-12 * (1.0 + std::abs(spd(i, j))))
                return std::nullopt;

    Matrix chol(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = spd(i, j);
            for (std::size_t k = 0; k < j; ++k) sum -= chol(i, k) * chol(j, k);
            if (i == j) {
                if (sum <= 0.0) return std::nullopt;
                chol(i, i) = std::sqrt(sum);
            } else {
                chol(i, j) = sum / chol(j, j);
            }
        }
    }
    return chol;
}

double gaussian_entropy(const Matrix& sigma) {
    const auto chol = cholesky(sigma);
    if (!chol) throw ArgumentError("covariance matrix is not symmetric positive definite");
    const std::size_t d = sigma.rows();
    double log_det = 0.0;
    for (std::size_t i = 0; i < d; ++i) log_det += 2.0 * std::log((*chol)(i, i));
    return 0.5 * static_cast<double>(d) * std::log(2.0 * M_PI * M_E) + 0.5 * log_det;
}

double uniform_entropy(const std::vector<std::pair<double, double>>& box) {
    if (box.empty()) throw ArgumentError("uniform box must have at least one dimension");
    double entropy = 0.0;
    for (const auto& [a, b] : box) {
        if (!(b > a)) throw ArgumentError("uniform box interval is empty");
        entropy += std::log(b - a);
    }
    return entropy;
}

double student_t_entropy(double dof) {
    if (!(dof > 0)) throw ArgumentError("student-t dof must be positive");
    const double half = dof / 2.0;
    return (dof + 1.0) / 2.0 * (digamma((dof + 1.0) / 2.0) - digamma(half)) +
           std::log(std::sqrt(dof)) + log_beta(half, 0.5);
}

}  // namespace ptc
