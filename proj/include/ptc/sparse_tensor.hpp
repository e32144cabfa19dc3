#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ptc/shape.hpp"

namespace ptc {

/// Sparse count tensor: strictly positive integer counts keyed by linear
/// index, stored sorted so that every iteration (likelihood sums, fits)
/// runs in the same deterministic order regardless of insertion order.
class SparseCountTensor {
public:
    /// Builds from an accumulation map; entries with count <= 0 are rejected.
    SparseCountTensor(Shape shape, const std::map<Index, std::int64_t>& entries);

    const Shape& shape() const { return shape_; }
    std::size_t nnz() const { return indices_.size(); }
    std::int64_t total_count() const { return total_; }

    const std::vector<Index>& indices() const { return indices_; }
    const std::vector<std::int64_t>& counts() const { return counts_; }

    /// Count at a multi-index; zero when the entry is not stored.
    std::int64_t at(const MultiIndex& index) const;

    /// Per-nonzero coordinates, nnz x d row-major. Materialized lazily by
    /// the constructor's caller-facing accessor since fits need it hot.
    const std::vector<Coord>& coordinates() const { return coords_; }

private:
    Shape shape_;
    std::vector<Index> indices_;         // sorted ascending
    std::vector<std::int64_t> counts_;   // parallel to indices_, all >= 1
    std::vector<Coord> coords_;          // nnz x d, row-major
    std::int64_t total_ = 0;
};

}  // namespace ptc
