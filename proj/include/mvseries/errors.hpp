#pragma once

#include <stdexcept>
#include <string>

namespace mvseries {

// Base for every error raised by the library. The CLI maps ValidationError
// to exit code 2 and everything else to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched lengths, index spaces or degrees.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An exact integer left its fixed width, or a slice exceeded the memo limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain (rho < 1, negative entries, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Real and complex data mixed without explicit promotion.
class FieldError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent user input (series files, CLI arguments).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mvseries
