#include "fibercos/error.hpp"

namespace fibercos {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::InvalidTolerance: return "invalid-tolerance";
    case ErrorKind::InvalidGramian: return "invalid-gramian";
    case ErrorKind::InvalidGrid: return "invalid-grid";
    case ErrorKind::GridMismatch: return "grid-mismatch";
    case ErrorKind::InvalidRegion: return "invalid-region";
    case ErrorKind::NumericalInconsistency: return "numerical-inconsistency";
    case ErrorKind::InvalidGroupPair: return "invalid-group-pair";
    case ErrorKind::InvalidSubgroupElement: return "invalid-subgroup-element";
    case ErrorKind::ProfileEvaluation: return "profile-evaluation";
    case ErrorKind::EmptyTargets: return "empty-targets";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace fibercos
