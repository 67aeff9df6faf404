#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mvpure/indices.hpp"

namespace mvpure {

struct TraceStep {
  int step = 0;  // number of sources in the evaluated sets
  double best_value = 0.0;
  int selected = -1;
  // (candidate index, index value) for every evaluated candidate, in
  // ascending candidate order; filled only when requested.
  std::vector<std::pair<int, double>> candidate_values;
};

struct SkippedCandidate {
  int step = 0;
  int index = 0;
  std::string reason;
};

/// A candidate whose projector had a degenerate gap at the requested rank
/// and was scored at rank - 1 instead.
struct RankFallback {
  int step = 0;
  int index = 0;
  int rank = 0;
};

struct LocalizationResult {
  SourceSet sources;  // in discovery order
  std::vector<TraceStep> index_trace;
  IndexKind index_kind = IndexKind::kMpzMvp;
  int rank_used = 0;
  std::vector<SkippedCandidate> skipped;
  std::vector<RankFallback> rank_fallbacks;
};

struct LocalizeOptions {
  int n_sources = 1;  // l0
  int rank = 1;       // r, ignored by the full-rank kinds
  IndexKind index_kind = IndexKind::kMpzMvp;
  int parallel_width = 1;  // 0: all hardware threads
  bool record_candidates = false;
};

/// Greedy source discovery. Step l scores theta u {i} for every candidate i
/// not yet selected and keeps the maximizer (lowest index on ties). The
/// reduced-rank indices use their full-rank form while l <= r. Degenerate
/// candidates are skipped and logged. Output does not depend on
/// parallel_width.
LocalizationResult localize_iterative(const LeadField& leadfield, const Covariance& R, const Covariance& N,
                                      const LocalizeOptions& options);
LocalizationResult localize_iterative(const IndexContext& context, const LocalizeOptions& options);

inline constexpr std::uint64_t kDefaultComboLimit = 200000;

/// Exhaustive maximizer over all n_sources-subsets. Sources come back in
/// ascending order; ties go to the lexicographically smallest subset.
LocalizationResult localize_bruteforce(const LeadField& leadfield, const Covariance& R, const Covariance& N,
                                       const LocalizeOptions& options,
                                       std::uint64_t combo_limit = kDefaultComboLimit);
LocalizationResult localize_bruteforce(const IndexContext& context, const LocalizeOptions& options,
                                       std::uint64_t combo_limit = kDefaultComboLimit);

/// n choose k, saturating at UINT64_MAX.
std::uint64_t binomial(int n, int k);

/// Calls fn for every ascending k-subset of [0, n) in lexicographic order.
void for_each_combination(int n, int k, const std::function<void(const std::vector<int>&)>& fn);

/// Resolves parallel_width: 0 maps to the hardware concurrency; the result
/// is at least 1.
int resolve_width(int parallel_width);

}  // namespace mvpure
