#pragma once

#include <stdexcept>
#include <string>

namespace fracocp {

/// Non-finite values or divergence during an integration or sweep.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid scenario configuration. The message starts with the offending
/// key path, e.g. "weights.r1: must be positive".
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure to create, write or read an artifact file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Series oracle that failed to converge.
class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fracocp
