#pragma once

#include <stdexcept>

namespace pairing {

// Error categories aligned with the CLI exit codes:
// ConfigError -> 2, DataError -> 3, CheckError -> 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace pairing
