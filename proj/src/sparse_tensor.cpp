#include "ptc/sparse_tensor.hpp"

#include <algorithm>
#include <string>

namespace ptc {

SparseCountTensor::SparseCountTensor(Shape shape,
                                     const std::map<Index, std::int64_t>& entries)
    : shape_(std::move(shape)) {
    indices_.reserve(entries.size());
    counts_.reserve(entries.size());
    coords_.reserve(entries.size() * shape_.ndim());
    for (const auto& [linear, count] : entries) {
        if (count <= 0)
            throw ArgumentError("sparse tensor counts must be >= 1");
        if (linear >= shape_.size())
            throw IndexError("entry index " + std::to_string(linear) +
                             " out of range for size " + std::to_string(shape_.size()));
        indices_.push_back(linear);
        counts_.push_back(count);
        const MultiIndex mi = delinearize(linear, shape_);
        coords_.insert(coords_.end(), mi.begin(), mi.end());
        total_ += count;
    }
}

std::int64_t SparseCountTensor::at(const MultiIndex& index) const {
    const Index linear = linearize(index, shape_);
    const auto it = std::lower_bound(indices_.begin(), indices_.end(), linear);
    if (it == indices_.end() || *it != linear) return 0;
    return counts_[static_cast<std::size_t>(it - indices_.begin())];
}

}  // namespace ptc
