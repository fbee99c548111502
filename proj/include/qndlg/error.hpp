#pragma once

#include <stdexcept>
#include <string>

namespace qndlg {

// Error taxonomy mirrors the CLI exit-code contract:
//   ParameterError -> exit 1 (usage / configuration)
//   everything else -> exit 2 (runtime / domain)
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pulses must be consumed in slot order; out-of-order access is a logic bug
// in the caller, not a numeric condition.
struct SequencingError : DomainError {
  using DomainError::DomainError;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qndlg
