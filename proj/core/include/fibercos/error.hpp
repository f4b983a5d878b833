#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fibercos {

enum class ErrorKind {
  DimensionMismatch,
  InvalidTolerance,
  InvalidGramian,
  InvalidGrid,
  GridMismatch,
  InvalidRegion,
  NumericalInconsistency,
  InvalidGroupPair,
  InvalidSubgroupElement,
  ProfileEvaluation,
  EmptyTargets,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fibercos
