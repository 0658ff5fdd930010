#pragma once

#include <stdexcept>
#include <string>

namespace ablategen {

// Base of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied argument or precondition is out of range.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Input data is malformed, empty, or otherwise unusable.
class DataError : public Error {
 public:
  using Error::Error;
};

// A token that must be scored received probability zero.
class DegenerateProbabilityError : public Error {
 public:
  using Error::Error;
};

// No shared number or month name to edit in a synthetic ablation.
class NoEditableFactError : public DataError {
 public:
  using DataError::DataError;
};

// Loss truncation rejected every example.
class EmptyKeepSetError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace ablategen
