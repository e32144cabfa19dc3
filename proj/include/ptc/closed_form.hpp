#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ptc/matrix.hpp"

namespace ptc {

/// In-place Cholesky factor L (lower) of an SPD matrix; nullopt when the
/// matrix is not symmetric positive definite.
std::optional<Matrix> cholesky(const Matrix& spd);

/// Differential entropy of N(mu, Sigma): d/2 log(2 pi e) + 1/2 log det Sigma,
/// with the log-determinant taken from a Cholesky factorization.
double gaussian_entropy(const Matrix& sigma);

/// Differential entropy of the uniform distribution over the box
/// prod_i (a_i, b_i): sum_i log(b_i - a_i).
double uniform_entropy(const std::vector<std::pair<double, double>>& box);

/// Differential entropy of the 1-D standard Student-t with `dof` degrees of
/// freedom: (dof+1)/2 [psi((dof+1)/2) - psi(dof/2)] + log(sqrt(dof) B(dof/2, 1/2)).
/// (Standard digamma/Beta expression; dof=1 gives the Cauchy value log 4 pi.)
double student_t_entropy(double dof);

}  // namespace ptc
