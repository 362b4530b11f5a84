#pragma once

#include <stdexcept>

namespace rotor {

// Exit-code mapping used by the CLI: 1 config, 2 data, 3 numerical.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedCsv : DataError {
    using DataError::DataError;
};

struct LengthMismatch : DataError {
    using DataError::DataError;
};

struct ZeroVariance : DataError {
    using DataError::DataError;
};

struct DegenerateFit : DataError {
    using DataError::DataError;
};

struct EmptyCalibration : DataError {
    using DataError::DataError;
};

struct InvalidGeometry : DataError {
    using DataError::DataError;
};

} // namespace rotor
