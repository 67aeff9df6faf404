#include "mvpure/errors.hpp"

#include <iostream>
#include <mutex>

namespace mvpure {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kRankOutOfRange: return "RankOutOfRange";
    case ErrorCode::kDegenerateGap: return "DegenerateGap";
    case ErrorCode::kNotSimilarizable: return "NotSimilarizable";
    case ErrorCode::kRankDeficientSubset: return "RankDeficientSubset";
    case ErrorCode::kEmptyWindow: return "EmptyWindow";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kNegativeGamma: return "NegativeGamma";
    case ErrorCode::kInfeasibleDimensions: return "InfeasibleDimensions";
    case ErrorCode::kQ0NotPD: return "Q0NotPD";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kQNotPositiveDefinite: return "QNotPositiveDefinite";
    case ErrorCode::kAllCandidatesDegenerate: return "AllCandidatesDegenerate";
    case ErrorCode::kComboLimitExceeded: return "ComboLimitExceeded";
    case ErrorCode::kSourceSetMismatch: return "SourceSetMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kFormatError: return "FormatError";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotSymmetric:
    case ErrorCode::kConvergenceFailure:
    case ErrorCode::kNotPositiveDefinite:
    case ErrorCode::kDegenerateGap:
    case ErrorCode::kNotSimilarizable:
    case ErrorCode::kRankDeficientSubset:
    case ErrorCode::kQ0NotPD:
    case ErrorCode::kQNotPositiveDefinite:
    case ErrorCode::kAllCandidatesDegenerate:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

namespace {
std::mutex g_sink_mutex;
WarningSink g_sink;
}  // namespace

void set_warning_sink(WarningSink sink) {
  std::lock_guard lock(g_sink_mutex);
  g_sink = std::move(sink);
}

void warn(std::string_view message) {
  std::lock_guard lock(g_sink_mutex);
  if (g_sink) {
    g_sink(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

}  // namespace mvpure
