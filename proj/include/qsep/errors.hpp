#pragma once

#include <stdexcept>
#include <string>

namespace qsep {

// Out-of-range element/vertex or malformed query.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Neighbor index past the vertex degree.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Illegal or infeasible generator / detector parameters.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested structures do not fit into n elements.
class CapacityError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// Function detector asked to run on a graph instance or vice versa.
class ModelMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by an oracle when a query would exceed its hard budget. Detectors let
// it propagate to their guard, which reports BudgetExceeded.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("query budget exhausted") {}
};

}  // namespace qsep
