#pragma once

#include <stdexcept>
#include <string>

namespace hyst {

/// Invalid or inconsistent experiment configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite state detected during a simulation; maps to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hyst
