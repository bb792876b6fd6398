#pragma once

#include <stdexcept>
#include <string>

namespace resilnet {

// Invalid input, config, or IO problem. CLI maps this to exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical/statistical failure, e.g. the exact enumerator exceeding its
// outcome bound. CLI maps this to exit code 3.
struct LimitError : std::runtime_error {
    explicit LimitError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad command line. CLI maps this to exit code 1.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace resilnet
