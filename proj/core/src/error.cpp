#include "vgt/error.hpp"

namespace vgt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidGraph: return "InvalidGraph";
    case ErrorCode::kUnmatchedVertex: return "UnmatchedVertex";
    case ErrorCode::kUnmatchedEdge: return "UnmatchedEdge";
    case ErrorCode::kDegenerateNormal: return "DegenerateNormal";
    case ErrorCode::kInvalidChannelMirror: return "InvalidChannelMirror";
    case ErrorCode::kEmptyChannel: return "EmptyChannel";
    case ErrorCode::kInsufficientSelfMirroredEdges: return "InsufficientSelfMirroredEdges";
    case ErrorCode::kUnsatisfiableSymmetry: return "UnsatisfiableSymmetry";
    case ErrorCode::kInitializationStalled: return "InitializationStalled";
    case ErrorCode::kNoValidMutation: return "NoValidMutation";
    case ErrorCode::kUnratedGenome: return "UnratedGenome";
    case ErrorCode::kBudgetZero: return "BudgetZero";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kNumericalBlowup: return "NumericalBlowup";
    case ErrorCode::kNoSettle: return "NoSettle";
    case ErrorCode::kDegenerateBeam: return "DegenerateBeam";
    case ErrorCode::kFlaggedTrajectory: return "FlaggedTrajectory";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kInvalidGenome: return "InvalidGenome";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace vgt
