#pragma once

#include <stdexcept>
#include <string>

namespace intaff {

enum class ErrorCode {
  DimensionMismatch,
  InvalidInput,
  NotASurface,
  Disconnected,
  MissingBoundaryWords,
  FixedCell,
  NotASubcomplex,
  NotACocycle,
  MismatchedClasses,
  SequenceNotExact,
  NotAnAutomorphism,
  NoFixedCovector,
  NonPolygonalChart,
  EpsilonTooLarge,
  UnboundedPolytope,
  EmptyPolytope,
  IdentificationConflict,
  RegionNotRegular,
  UnknownName,
  Parse,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; the code tells callers (and the CLI)
// which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace intaff
