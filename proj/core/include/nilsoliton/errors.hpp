#pragma once

#include <stdexcept>
#include <string>

namespace nilsoliton {

/// Violated precondition or malformed input (dimension mismatch, bad family
/// parameters, non-finite entries, ...).
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Shape mismatch between tensors, matrices or group elements.
class DimensionError : public ContractError {
 public:
  explicit DimensionError(const std::string& what) : ContractError(what) {}
};

/// A numerical procedure produced NaN/Inf or otherwise could not proceed.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nilsoliton
