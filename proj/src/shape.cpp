#include "ptc/shape.hpp"

#include <limits>
#include <string>

namespace ptc {

Shape::Shape(std::vector<Coord> dims) : dims_(std::move(dims)) {
    if (dims_.empty())
        throw ArgumentError("shape must have at least one dimension");
    Index total = 1;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        const Coord n = dims_[k];
        if (n < 1)
            throw ArgumentError("shape dimension " + std::to_string(k) + " must be >= 1");
        if (total > std::numeric_limits<Index>::max() / n)
            throw ArgumentError("shape total size overflows 64 bits");
        total *= n;
    }
    total_ = total;
}

Index linearize(const MultiIndex& index, const Shape& shape) {
    if (index.size() != shape.ndim())
        throw IndexError("multi-index has " + std::to_string(index.size()) +
                         " coordinates, shape has " + std::to_string(shape.ndim()));
    Index linear = 0;
    Index stride = 1;
    for (std::size_t k = 0; k < index.size(); ++k) {
        if (index[k] >= shape.dim(k))
            throw IndexError("coordinate " + std::to_string(index[k]) +
                             " out of range for mode " + std::to_string(k) +
                             " of extent " + std::to_string(shape.dim(k)));
        linear += stride * index[k];
        stride *= shape.dim(k);
    }
    return linear;
}

MultiIndex delinearize(Index linear, const Shape& shape) {
    if (linear >= shape.size())
        throw IndexError("linear index " + std::to_string(linear) +
                         " out of range for size " + std::to_string(shape.size()));
    MultiIndex index(shape.ndim());
    for (std::size_t k = 0; k < shape.ndim(); ++k) {
        const Index n = shape.dim(k);
        index[k] = static_cast<Coord>(linear % n);
        linear /= n;
    }
    return index;
}

std::vector<Index> strides_of(const Shape& shape) {
    std::vector<Index> strides(shape.ndim());
    Index stride = 1;
    for (std::size_t k = 0; k < shape.ndim(); ++k) {
        strides[k] = stride;
        stride *= shape.dim(k);
    }
    return strides;
}

}  // namespace ptc
