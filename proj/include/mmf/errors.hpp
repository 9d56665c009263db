#pragma once

#include <stdexcept>
#include <string>

namespace mmf {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Caller broke a precondition (division by zero, bad dimensions, ...).
class UsageError : public Error {
  public:
    using Error::Error;
};

// Input notation could not be parsed.
class ParseError : public Error {
  public:
    using Error::Error;
};

// Mathematically inconsistent data (degree law violations, d^2 != 0, ...).
class DataError : public Error {
  public:
    using Error::Error;
};

}  // namespace mmf
