#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ptc/matrix.hpp"
#include "ptc/shape.hpp"

namespace ptc {

/// Axis-aligned binning grid: one strictly increasing edge sequence per
/// dimension. Bins are half-open [e_j, e_{j+1}) except the final bin of
/// each dimension, which is right-closed so the maximum sample is kept.
class BinningGrid {
public:
    explicit BinningGrid(std::vector<std::vector<double>> edges);

    std::size_t ndim() const { return edges_.size(); }
    const Shape& shape() const { return shape_; }
    const std::vector<double>& edges(std::size_t dim) const { return edges_[dim]; }

    double width(std::size_t dim, Coord bin) const {
        return edges_[dim][bin + 1] - edges_[dim][bin];
    }
    double bin_volume(const MultiIndex& index) const;
    double log_bin_volume(const MultiIndex& index) const;

    /// Bin containing x, or nullopt when x lies outside the box B.
    std::optional<MultiIndex> bin_point(std::span<const double> x) const;

private:
    std::vector<std::vector<double>> edges_;
    Shape shape_;
};

/// Bin width rule c * s^{-1/(d+2)}; c = 3.5 is the default used for
/// histogram baselines, chosen near the asymptotically optimal width
/// for a standard multivariate normal.
double scott_width(std::int64_t samples, std::size_t dim, double c);

/// Equal-width grid spanning [min_i, max_i] with bins_per_dim[i] bins in
/// dimension i. Requires s >= 2 and min_i < max_i in every dimension.
BinningGrid grid_from_samples(const Matrix& samples, const std::vector<Coord>& bins_per_dim);

/// Convenience: the same bin count in every dimension.
BinningGrid grid_from_samples(const Matrix& samples, Coord bins_per_dim);

/// Fixed-width grid: dimension i starts at min_i and uses consecutive
/// width-`width` bins until max_i is covered (the last edge may overshoot).
BinningGrid grid_from_width(const Matrix& samples, double width);

/// Grid scaled by alpha in every dimension (edges multiplied by alpha).
BinningGrid scale_grid(const BinningGrid& grid, double alpha);

}  // namespace ptc
