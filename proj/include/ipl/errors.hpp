#pragma once

#include <stdexcept>
#include <string>

namespace ipl {

/// Malformed lattice or run description (bad cell count, empty interval, unknown preset).
class InvalidSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument outside the documented range of an operation.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input violates a precondition the caller is responsible for
/// (unnormalized eigenvector, unsorted spectrum).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The tridiagonal eigensolver exceeded its iteration cap.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, std::size_t index)
      : std::runtime_error(what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ipl
