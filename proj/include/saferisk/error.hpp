#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace saferisk {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Bad input data or a violated precondition. The CLI maps this to exit code 1.
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// File could not be opened, read or written. The CLI maps this to exit code 2.
class IoError : public Error
{
public:
  using Error::Error;
};

/// Raised by the escalation query when the conditioning window holds too few pairs.
class InsufficientSupport : public ValidationError
{
public:
  InsufficientSupport(std::size_t count, std::size_t required)
    : ValidationError("insufficient conditional support: " +
                      std::to_string(count) + " pairs in window, " +
                      std::to_string(required) + " required")
    , count_(count)
  {
  }

  std::size_t count() const { return count_; }

private:
  std::size_t count_;
};

} // namespace saferisk
