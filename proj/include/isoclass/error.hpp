#pragma once

#include <stdexcept>
#include <string>

namespace isoclass {

/// Malformed or out-of-contract input (CLI exit 2).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The supplied (M, G) pair does not satisfy MᵀGM = G (CLI exit 3).
class NotAnIsometry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric decision fell inside its tolerance margin (CLI exit 4).
class Indeterminate : public std::runtime_error {
 public:
  Indeterminate(std::string quantity, double value, double threshold);
  const std::string& quantity() const noexcept { return quantity_; }
  double value() const noexcept { return value_; }
  double threshold() const noexcept { return threshold_; }

 private:
  std::string quantity_;
  double value_;
  double threshold_;
};

/// A postcondition of an exact algorithm failed: always a bug, never bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace isoclass
