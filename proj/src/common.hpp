#pragma once

#include <stdexcept>
#include <string>

namespace sb {

// error categories map 1:1 onto C API status codes / CLI exit codes
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// deliberate refusal (input too large for an exact method), not a failure
struct ResourceRefused : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sb
