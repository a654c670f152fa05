#pragma once

#include <stdexcept>
#include <string>

namespace lmx {

/// A configuration value is missing, malformed or out of range.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (empty population, length mismatch, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace lmx
