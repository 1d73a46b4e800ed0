#pragma once

#include <stdexcept>

namespace plir {

/// Thrown when an iterative numerical routine cannot meet its tolerance
/// (quadrature depth exhausted, minimizer bracket failure, LP breakdown).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace plir
