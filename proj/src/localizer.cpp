#include "mvpure/localizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "mvpure/errors.hpp"

namespace mvpure {
namespace {

struct Evaluation {
  bool ok = false;
  double value = -std::numeric_limits<double>::infinity();
  int fallback_rank = 0;  // nonzero when scored at a reduced rank
  std::string reason;
};

Evaluation score(const IndexContext& context, const SourceSet& theta, IndexKind kind, int rank) {
  Evaluation ev;
  IndexKernel kernel;
  try {
    kernel = build_kernel(context, theta);
  } catch (const Error& e) {
    ev.reason = e.what();
    return ev;
  }
  int r = rank;
  for (;;) {
    try {
      ev.value = evaluate_index(kernel, kind, r);
      break;
    } catch (const Error& e) {
      // One retry at r - 1 when the projector is ill-defined at r.
      if (e.code() == ErrorCode::kDegenerateGap && r == rank && r > 1) {
        --r;
        ev.fallback_rank = r;
        continue;
      }
      ev.reason = e.what();
      return ev;
    }
  }
  if (!std::isfinite(ev.value)) {
    ev.reason = "index value is not finite";
    ev.value = -std::numeric_limits<double>::infinity();
    return ev;
  }
  ev.ok = true;
  return ev;
}

template <typename Fn>
void parallel_for(std::size_t count, int width, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, width));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> threads;
  const std::size_t used = std::min(workers, count);
  threads.reserve(used);
  for (std::size_t t = 0; t < used; ++t) {
    threads.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += used) fn(i);
    });
  }
}

void check_dimensions(const IndexContext& context, const LocalizeOptions& o) {
  const int m = context.leadfield().num_channels();
  const int s = context.leadfield().num_sources();
  const bool rank_ok = !is_reduced_rank(o.index_kind) || (o.rank >= 1 && o.rank <= o.n_sources);
  if (o.n_sources < 1 || o.n_sources > std::min(m - 1, s) || !rank_ok) {
    std::ostringstream os;
    os << "need 1 <= r <= l0 <= min(m - 1, s); got r=" << o.rank << " l0=" << o.n_sources << " m=" << m
       << " s=" << s;
    fail(ErrorCode::kInfeasibleDimensions, os.str());
  }
}

}  // namespace

int resolve_width(int parallel_width) {
  if (parallel_width > 0) return parallel_width;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (result > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

void for_each_combination(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> combo(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) combo[static_cast<std::size_t>(i)] = i;
  for (;;) {
    fn(combo);
    int i = k - 1;
    while (i >= 0 && combo[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++combo[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
  }
}

LocalizationResult localize_iterative(const IndexContext& context, const LocalizeOptions& options) {
  check_dimensions(context, options);
  const int s = context.leadfield().num_sources();
  const int width = resolve_width(options.parallel_width);

  LocalizationResult result;
  result.index_kind = options.index_kind;
  result.rank_used = is_reduced_rank(options.index_kind) ? options.rank : options.n_sources;

  SourceSet selected;
  for (int step = 1; step <= options.n_sources; ++step) {
    std::vector<int> candidates;
    for (int i = 0; i < s; ++i) {
      if (!selected.contains(i)) candidates.push_back(i);
    }
    std::vector<Evaluation> evals(candidates.size());
    parallel_for(candidates.size(), width, [&](std::size_t j) {
      evals[j] = score(context, selected.with(candidates[j]), options.index_kind, options.rank);
    });

    TraceStep trace;
    trace.step = step;
    trace.best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      const Evaluation& ev = evals[j];
      if (!ev.ok) {
        result.skipped.push_back({step, candidates[j], ev.reason});
        continue;
      }
      if (ev.fallback_rank > 0) result.rank_fallbacks.push_back({step, candidates[j], ev.fallback_rank});
      if (options.record_candidates) trace.candidate_values.emplace_back(candidates[j], ev.value);
      if (trace.selected < 0 || ev.value > trace.best_value) {
        trace.best_value = ev.value;
        trace.selected = candidates[j];
      }
    }
    if (trace.selected < 0) {
      fail(ErrorCode::kAllCandidatesDegenerate, "every remaining candidate was degenerate at step " +
                                                    std::to_string(step) + " (e.g. " +
                                                    result.skipped.back().reason + ")");
    }
    selected = selected.with(trace.selected);
    result.index_trace.push_back(std::move(trace));
  }
  result.sources = selected;
  return result;
}

LocalizationResult localize_iterative(const LeadField& leadfield, const Covariance& R, const Covariance& N,
                                      const LocalizeOptions& options) {
  return localize_iterative(IndexContext(leadfield, R, N), options);
}

LocalizationResult localize_bruteforce(const IndexContext& context, const LocalizeOptions& options,
                                       std::uint64_t combo_limit) {
  check_dimensions(context, options);
  const int s = context.leadfield().num_sources();
  const std::uint64_t combos = binomial(s, options.n_sources);
  if (combos > combo_limit) {
    std::ostringstream os;
    os << "C(" << s << ", " << options.n_sources << ") = " << combos << " subsets exceeds the limit of "
       << combo_limit;
    fail(ErrorCode::kComboLimitExceeded, os.str());
  }
  std::vector<std::vector<int>> subsets;
  subsets.reserve(static_cast<std::size_t>(combos));
  for_each_combination(s, options.n_sources, [&](const std::vector<int>& c) { subsets.push_back(c); });

  std::vector<Evaluation> evals(subsets.size());
  parallel_for(subsets.size(), resolve_width(options.parallel_width), [&](std::size_t j) {
    evals[j] = score(context, SourceSet(subsets[j]), options.index_kind, options.rank);
  });

  LocalizationResult result;
  result.index_kind = options.index_kind;
  result.rank_used = is_reduced_rank(options.index_kind) ? options.rank : options.n_sources;
  TraceStep trace;
  trace.step = options.n_sources;
  trace.best_value = -std::numeric_limits<double>::infinity();
  std::size_t best = subsets.size();
  for (std::size_t j = 0; j < subsets.size(); ++j) {
    if (!evals[j].ok) {
      // Subsets have no single candidate index; record the first member.
      result.skipped.push_back({options.n_sources, subsets[j].front(), evals[j].reason});
      continue;
    }
    if (best == subsets.size() || evals[j].value > trace.best_value) {
      best = j;
      trace.best_value = evals[j].value;
    }
  }
  if (best == subsets.size()) {
    fail(ErrorCode::kAllCandidatesDegenerate,
         "every subset was degenerate (e.g. " + result.skipped.back().reason + ")");
  }
  result.sources = SourceSet(subsets[best]);
  trace.selected = subsets[best].back();
  result.index_trace.push_back(std::move(trace));
  return result;
}

LocalizationResult localize_bruteforce(const LeadField& leadfield, const Covariance& R, const Covariance& N,
                                       const LocalizeOptions& options, std::uint64_t combo_limit) {
  return localize_bruteforce(IndexContext(leadfield, R, N), options, combo_limit);
}

}  // namespace mvpure
