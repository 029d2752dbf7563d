#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vgt {

enum class ErrorCode {
  kInvalidGraph,
  kUnmatchedVertex,
  kUnmatchedEdge,
  kDegenerateNormal,
  kInvalidChannelMirror,
  kEmptyChannel,
  kInsufficientSelfMirroredEdges,
  kUnsatisfiableSymmetry,
  kInitializationStalled,
  kNoValidMutation,
  kUnratedGenome,
  kBudgetZero,
  kInvalidConfig,
  kNumericalBlowup,
  kNoSettle,
  kDegenerateBeam,
  kFlaggedTrajectory,
  kOutOfRange,
  kNonFiniteLoss,
  kInvalidGenome,
  kParse,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vgt
