#pragma once

#include <stdexcept>
#include <string>

namespace holosim {

/// Raised when a configuration file is missing, malformed, or violates the schema.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when an integration aborts (trace drift, unitarity loss, bad step size).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace holosim
