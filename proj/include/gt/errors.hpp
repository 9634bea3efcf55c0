// Error categories shared by all modules; the command-line front end maps them
// to exit codes (configuration 2, verification 1, precision 3).
#pragma once

#include <stdexcept>
#include <string>

namespace gt {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gt
