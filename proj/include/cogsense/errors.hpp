#pragma once

#include <stdexcept>
#include <string>

namespace cogsense {

// Invalid configuration value or parameter outside its legal domain.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed runtime input (empty sequence, length mismatch, ...).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// API misuse: calling an operation on an object in the wrong state/mode.
class UsageError : public std::logic_error {
public:
    explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

// Reporting-channel gain too small to equalize against.
class DeepFadeError : public std::runtime_error {
public:
    explicit DeepFadeError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failure while reading or emitting results.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cogsense
