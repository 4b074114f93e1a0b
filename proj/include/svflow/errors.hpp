#pragma once

#include <stdexcept>
#include <string>

namespace svflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameters or mutually incompatible inputs (CLI exit code 1).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Numerical failure: indefinite matrix, solver breakdown, overflow (exit code 2).
class NumericError : public Error {
 public:
  using Error::Error;
};

// Filesystem or file-format failure (exit code 3).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace svflow
