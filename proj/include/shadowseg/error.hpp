#pragma once

#include <stdexcept>
#include <string>

namespace shadowseg {

// Base of every error raised by the library. The C API maps each subclass
// onto one ss_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File missing, unreadable or unwritable.
class IoError : public Error {
 public:
  using Error::Error;
};

// File readable but the content is not an acceptable image or mask.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Arguments violate a documented precondition (mismatched sizes, overlapping
// labels, inverted intervals, empty inputs).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

// Not enough labeled pixels to derive interval bounds.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

// Bad configuration value. field() names the offending key.
class UsageError : public Error {
 public:
  UsageError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace shadowseg
