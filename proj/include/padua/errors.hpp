#pragma once

#include <stdexcept>
#include <string>

namespace padua {

/// Bad arguments or configuration (CLI exit code 2).
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Oracle, file or format failure (CLI exit code 3).
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace padua
