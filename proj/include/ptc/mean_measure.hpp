#pragma once

#include <cstdint>
#include <vector>

#include "ptc/density.hpp"
#include "ptc/grid.hpp"

namespace ptc {

/// 1-D margin of a product distribution with an evaluable CDF.
struct Margin {
    enum class Family { Uniform, Normal, StudentT };
    Family family = Family::Uniform;
    double a = 0.0, b = 1.0;      // uniform support
    double mean = 0.0, sd = 1.0;  // normal parameters
    double dof = 1.0;             // student-t degrees of freedom

    static Margin uniform(double a, double b);
    static Margin normal(double mean, double sd);
    static Margin student_t(double dof);

    double cdf(double x) const;
};

/// Mean measure nu_j = s * prod_i (F_i(e_{i,j+1}) - F_i(e_{i,j})) for every
/// bin of the grid, keyed by linear bin index. Oracle-scale only: refuses
/// grids beyond `budget` bins.
std::vector<double> true_mean_measure(const BinningGrid& grid,
                                      const std::vector<Margin>& margins,
                                      std::int64_t samples,
                                      Index budget = kDefaultEnumerationBudget);

}  // namespace ptc
