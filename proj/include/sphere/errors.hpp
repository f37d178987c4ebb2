#pragma once

#include <stdexcept>
#include <string>

namespace sphere {

// Exception taxonomy. The CLI maps PreconditionError (and subclasses) to exit
// status 2 and BudgetError to exit status 3.

class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// Dimension mismatches and other broken call contracts.
class ContractError : public PreconditionError {
 public:
  explicit ContractError(const std::string& what) : PreconditionError(what) {}
};

// A point outside the stereographic chart, a time outside the flow range, a
// flow time below t0 for rho, ...
class DomainError : public PreconditionError {
 public:
  explicit DomainError(const std::string& what) : PreconditionError(what) {}
};

// A point table is too shallow for the requested query.
class CoverageError : public PreconditionError {
 public:
  explicit CoverageError(const std::string& what) : PreconditionError(what) {}
};

// The Iwasawa factorisation could not be read off within tolerance.
class DecompositionError : public std::runtime_error {
 public:
  explicit DecompositionError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical integration did not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration would exceed the configured candidate budget.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sphere
