#pragma once

#include <stdexcept>
#include <string>

namespace hciz {

// Invalid arguments or violated preconditions (bad dimensions, unsorted
// input, parameters out of range).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Input data that fails a structural invariant (non-Hermitian matrix,
// non-unitary conjugator).
class StructuralError : public std::invalid_argument {
 public:
  explicit StructuralError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Data that is internally inconsistent beyond numerical tolerance, e.g. a
// triangle whose rows cannot come from any Hermitian matrix.
class InconsistencyError : public std::runtime_error {
 public:
  explicit InconsistencyError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace hciz
