#pragma once

#include <stdexcept>
#include <string>

namespace ptc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A coordinate or linear index outside its valid range.
struct IndexError : Error {
    using Error::Error;
};

/// An argument that violates a precondition (bad size, sign, family, ...).
struct ArgumentError : Error {
    using Error::Error;
};

/// A binning grid that cannot be built from the given samples.
struct GridError : Error {
    using Error::Error;
};

/// A requested enumeration that exceeds the configured budget.
struct CapacityError : Error {
    using Error::Error;
};

/// A violated structural invariant (non-stochastic factors, degenerate model).
struct InvariantError : Error {
    using Error::Error;
};

/// NaN/Inf encountered while iterating; carries the outer iteration number.
struct NumericalError : Error {
    NumericalError(const std::string& what, int iteration)
        : Error(what), iteration(iteration) {}
    int iteration = -1;
};

/// CSV ingestion produced no usable rows.
struct IngestError : Error {
    using Error::Error;
};

/// File I/O failure.
struct IoError : Error {
    using Error::Error;
};

}  // namespace ptc
