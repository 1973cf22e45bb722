#pragma once

#include <stdexcept>

namespace poitrack {

// Bad configuration (unknown key, out-of-range value, conflicting flags).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input data (malformed file, missing sequence, inconsistent contents).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace poitrack
