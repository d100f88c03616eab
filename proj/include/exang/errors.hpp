#pragma once

#include <stdexcept>
#include <string>

namespace exang {

// Parameter outside its mathematical domain (negative range, |rho| >= 1, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Caller violated an interface contract (dimension mismatch, bad index set).
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// Input data, configuration or model specification failed validation.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A covariance or precision matrix could not be factorized within the jitter budget.
class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace exang
