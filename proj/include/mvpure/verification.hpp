#pragma once

#include <string>
#include <vector>

namespace mvpure {

/// Settings shared by the property checks.
struct VerifyOptions {
  // Negative control: the unbiasedness sweep evaluates its indices against a
  // halved noise covariance, which moves the optimum value off its target.
  bool break_unbiasedness = false;
  // Width handed to the localizer (0: all hardware threads).
  int threads = 1;
};

struct CriterionInfo {
  int id = 0;
  std::string name;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// The ten checks, in id order.
const std::vector<CriterionInfo>& criteria();

/// Runs one check; unknown ids throw InvalidArgument. Library errors raised
/// inside a check mark it failed with the error in `detail`.
CriterionResult run_criterion(int id, const VerifyOptions& options = {});

/// Runs the listed ids (all when empty) in order.
std::vector<CriterionResult> run_suite(const VerifyOptions& options = {}, const std::vector<int>& ids = {});

/// "[PASS] 3 resolution-orderings (0.41 s): detail"
std::string format_result(const CriterionResult& result);

}  // namespace mvpure
