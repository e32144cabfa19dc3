#include "ptc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ptc {

namespace {

std::vector<Coord> edge_counts(const std::vector<std::vector<double>>& edges) {
    std::vector<Coord> dims;
    dims.reserve(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (edges[k].size() < 2)
            throw GridError("dimension " + std::to_string(k) + " needs at least two edges");
        for (std::size_t j = 0; j + 1 < edges[k].size(); ++j)
            if (!(edges[k][j] < edges[k][j + 1]))
                throw GridError("edges of dimension " + std::to_string(k) +
                                " are not strictly increasing");
        dims.push_back(static_cast<Coord>(edges[k].size() - 1));
    }
    return dims;
}

struct Extent {
    double lo;
    double hi;
};

std::vector<Extent> sample_extents(const Matrix& samples) {
    if (samples.rows() < 2)
        throw GridError("need at least two samples to build a grid");
    const std::size_t d = samples.cols();
    std::vector<Extent> extents(d, {samples(0, 0), samples(0, 0)});
    for (std::size_t k = 0; k < d; ++k)
        extents[k] = {samples(0, k), samples(0, k)};
    for (std::size_t i = 1; i < samples.rows(); ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            extents[k].lo = std::min(extents[k].lo, samples(i, k));
            extents[k].hi = std::max(extents[k].hi, samples(i, k));
        }
    }
    for (std::size_t k = 0; k < d; ++k)
        if (!(extents[k].lo < extents[k].hi))
            throw GridError("dimension " + std::to_string(k) +
                            " is degenerate (min equals max)");
    return extents;
}

}  // namespace

BinningGrid::BinningGrid(std::vector<std::vector<double>> edges)
    : edges_(std::move(edges)), shape_(edge_counts(edges_)) {}

double BinningGrid::bin_volume(const MultiIndex& index) const {
    double volume = 1.0;
    for (std::size_t k = 0; k < ndim(); ++k) volume *= width(k, index[k]);
    return volume;
}

double BinningGrid::log_bin_volume(const MultiIndex& index) const {
    double log_volume = 0.0;
    for (std::size_t k = 0; k < ndim(); ++k) log_volume += std::log(width(k, index[k]));
    return log_volume;
}

std::optional<MultiIndex> BinningGrid::bin_point(std::span<const double> x) const {
    if (x.size() != ndim())
        throw ArgumentError("point has " + std::to_string(x.size()) +
                            " coordinates, grid has " + std::to_string(ndim()));
    MultiIndex index(ndim());
    for (std::size_t k = 0; k < ndim(); ++k) {
        const std::vector<double>& e = edges_[k];
        const double v = x[k];
        // negated form so NaN coordinates land outside the box
        if (!(v >= e.front() && v <= e.back())) return std::nullopt;
        if (v == e.back()) {
            index[k] = static_cast<Coord>(e.size() - 2);  // right-closed final bin
            continue;
        }
        const auto it = std::upper_bound(e.begin(), e.end(), v);
        index[k] = static_cast<Coord>(it - e.begin() - 1);
    }
    return index;
}

double scott_width(std::int64_t samples, std::size_t dim, double c) {
    if (samples < 1) throw ArgumentError("scott_width needs s >= 1");
    if (dim < 1) throw ArgumentError("scott_width needs d >= 1");
    if (!(c > 0)) throw ArgumentError("scott_width needs c > 0");
    return c * std::pow(static_cast<double>(samples),
                        -1.0 / (static_cast<double>(dim) + 2.0));
}

BinningGrid grid_from_samples(const Matrix& samples, const std::vector<Coord>& bins_per_dim) {
    if (bins_per_dim.size() != samples.cols())
        throw ArgumentError("bins_per_dim size does not match sample dimension");
    const auto extents = sample_extents(samples);
    std::vector<std::vector<double>> edges(samples.cols());
    for (std::size_t k = 0; k < samples.cols(); ++k) {
        const Coord n = bins_per_dim[k];
        if (n < 1) throw ArgumentError("bins per dimension must be >= 1");
        edges[k].resize(n + 1);
        const double lo = extents[k].lo;
        const double hi = extents[k].hi;
        for (Coord j = 0; j <= n; ++j)
            edges[k][j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n);
        edges[k][0] = lo;
        edges[k][n] = hi;  // exact endpoints regardless of rounding
    }
    return BinningGrid(std::move(edges));
}

BinningGrid grid_from_samples(const Matrix& samples, Coord bins_per_dim) {
    return grid_from_samples(samples, std::vector<Coord>(samples.cols(), bins_per_dim));
}

BinningGrid grid_from_width(const Matrix& samples, double width) {
    if (!(width > 0)) throw ArgumentError("bin width must be positive");
    const auto extents = sample_extents(samples);
    std::vector<std::vector<double>> edges(samples.cols());
    for (std::size_t k = 0; k < samples.cols(); ++k) {
        const double span = extents[k].hi - extents[k].lo;
        // Tiny relative slack so exactly divisible spans do not gain a bin.
        auto bins = static_cast<std::uint64_t>(std::ceil(span / width * (1.0 - 1e-12)));
        if (bins == 0) bins = 1;
        while (extents[k].lo + static_cast<double>(bins) * width < extents[k].hi) ++bins;
        edges[k].resize(bins + 1);
        for (std::uint64_t j = 0; j <= bins; ++j)
            edges[k][j] = extents[k].lo + static_cast<double>(j) * width;
    }
    return BinningGrid(std::move(edges));
}

BinningGrid scale_grid(const BinningGrid& grid, double alpha) {
    if (!(alpha > 0)) throw ArgumentError("grid scale must be positive");
    std::vector<std::vector<double>> edges(grid.ndim());
    for (std::size_t k = 0; k < grid.ndim(); ++k) {
        edges[k] = grid.edges(k);
        for (double& e : edges[k]) e *= alpha;
    }
    return BinningGrid(std::move(edges));
}

}  // namespace ptc
