#pragma once

#include <stdexcept>

namespace mk {

/// Raised when a computation cannot be trusted: undersampled loops,
/// singular systems, quadrature routes that disagree.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mk
