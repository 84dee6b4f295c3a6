// errors.hpp - exception types shared across the library.
//
// Domain violations (bad parameters, malformed inputs) are reported with
// std::invalid_argument. Numerical breakdowns use NumericError, config-file
// problems use ConfigError; the CLI maps them to distinct exit codes.

#pragma once

#include <stdexcept>
#include <string>

namespace qswap {

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qswap
