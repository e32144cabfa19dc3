#pragma once

#include <cstdint>
#include <span>

#include "ptc/grid.hpp"
#include "ptc/sparse_tensor.hpp"

namespace ptc {

/// Frequency histogram over a binning grid. `total_samples` counts every
/// input point; `outside` counts the points that fell outside the box B
/// and are excluded from the counts tensor.
struct HistogramDensity {
    BinningGrid grid;
    SparseCountTensor counts;
    std::int64_t total_samples = 0;
    std::int64_t outside = 0;

    std::int64_t binned_samples() const { return total_samples - outside; }

    /// Density value c_j / (s |B_j|) at x, zero off the box.
    double value(std::span<const double> x) const;
};

HistogramDensity build_histogram(const Matrix& samples, BinningGrid grid);

/// Plug-in entropy of the histogram density,
///   -sum_j (c_j/s) log(c_j/s) + sum_j (c_j/s) log|B_j|,
/// in nats, with the x log x -> 0 convention for empty bins. The
/// normalizer s is the number of binned samples: points outside B are
/// excluded from both sums and the normalizer.
double histogram_entropy(const HistogramDensity& histogram);

/// Fraction of bins with nonzero count.
double occupancy(const HistogramDensity& histogram);

}  // namespace ptc
