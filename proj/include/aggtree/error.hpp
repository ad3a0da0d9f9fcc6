#pragma once

#include <stdexcept>
#include <string>

namespace aggtree {

enum class ErrorKind {
  MissingNode,
  CycleDetected,
  NonTopologyEdge,
  WouldCreateCycle,
  InvalidDeadline,
  TooLarge,
  Disconnected,
  NotConstructible,
  BudgetExceeded,
  LengthMismatch,
  ConfigInvalid,
  EmptyGroup,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and tests)
/// can branch on it without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace aggtree
