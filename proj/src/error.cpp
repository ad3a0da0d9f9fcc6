#include "aggtree/error.hpp"

namespace aggtree {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingNode: return "MissingNode";
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::NonTopologyEdge: return "NonTopologyEdge";
    case ErrorKind::WouldCreateCycle: return "WouldCreateCycle";
    case ErrorKind::InvalidDeadline: return "InvalidDeadline";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::NotConstructible: return "NotConstructible";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::EmptyGroup: return "EmptyGroup";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace aggtree
