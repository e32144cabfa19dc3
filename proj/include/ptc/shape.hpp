#pragma once

#include <cstdint>
#include <vector>

#include "ptc/error.hpp"

namespace ptc {

using Coord = std::uint32_t;   // per-mode bin coordinate, zero-based
using Index = std::uint64_t;   // linear bin index

/// Zero-based multi-index (i_1, ..., i_d), one coordinate per mode.
using MultiIndex = std::vector<Coord>;

/// Tensor extents (n_1, ..., n_d). Construction rejects empty shapes,
/// zero extents, and total sizes that do not fit in 64 bits.
class Shape {
public:
    Shape() = default;  // empty placeholder, as after a move
    explicit Shape(std::vector<Coord> dims);

    std::size_t ndim() const { return dims_.size(); }
    Coord dim(std::size_t mode) const { return dims_[mode]; }
    const std::vector<Coord>& dims() const { return dims_; }

    /// Total number of entries n = prod n_i.
    Index size() const { return total_; }

    bool operator==(const Shape& other) const { return dims_ == other.dims_; }
    bool operator!=(const Shape& other) const { return !(*this == other); }

private:
    std::vector<Coord> dims_;
    Index total_ = 0;
};

/// Column-major linear index (first mode fastest):
/// l = i_1 + n_1*i_2 + n_1*n_2*i_3 + ...
/// This is the single canonical bin <-> tensor mapping used everywhere;
/// indices are zero-based.
Index linearize(const MultiIndex& index, const Shape& shape);

/// Inverse of linearize.
MultiIndex delinearize(Index linear, const Shape& shape);

/// Per-mode strides of the column-major layout (stride of mode 0 is 1).
std::vector<Index> strides_of(const Shape& shape);

}  // namespace ptc
