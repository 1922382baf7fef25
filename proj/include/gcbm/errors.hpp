#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gcbm {

/// Invalid argument ranges (model parameters, counting domains, preconditions).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An operation would exceed its stated enumeration / search budget.
struct BudgetExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An input that is structurally empty where content is required
/// (e.g. spectral initialization with zero sampled edges).
struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// GF(2) system has no solution; signals corrupted input for noiseless data.
struct InconsistentSystemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// GF(2) system has more solutions than the global-flip symmetry explains.
class UnderdeterminedError : public std::runtime_error {
 public:
  UnderdeterminedError(const std::string& msg, std::size_t kernel_dim)
      : std::runtime_error(msg), kernel_dim_(kernel_dim) {}
  std::size_t kernel_dim() const { return kernel_dim_; }

 private:
  std::size_t kernel_dim_;
};

/// Bad sweep configuration (raised before any trial runs).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gcbm
