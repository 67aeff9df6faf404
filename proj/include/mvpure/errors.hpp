#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mvpure {

/// Failure categories raised by the library. The enumerator names double as
/// the stable identifiers reported on the command line and in bindings.
enum class ErrorCode {
  kNotSymmetric,
  kConvergenceFailure,
  kNotPositiveDefinite,
  kRankOutOfRange,
  kDegenerateGap,
  kNotSimilarizable,
  kRankDeficientSubset,
  kEmptyWindow,
  kTooFewSamples,
  kNegativeGamma,
  kInfeasibleDimensions,
  kQ0NotPD,
  kDimensionMismatch,
  kQNotPositiveDefinite,
  kAllCandidatesDegenerate,
  kComboLimitExceeded,
  kSourceSetMismatch,
  kInvalidArgument,
  kIoError,
  kFormatError,
};

std::string_view error_name(ErrorCode code);

/// True for codes that signal a numerical breakdown (PD checks, spectral
/// gaps, eigensolver failure) rather than bad input.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const { return error_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

// Warnings go to stderr unless a sink is installed.
using WarningSink = std::function<void(std::string_view)>;
void set_warning_sink(WarningSink sink);
void warn(std::string_view message);

}  // namespace mvpure
