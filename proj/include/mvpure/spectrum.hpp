#pragma once

#include <vector>

#include "mvpure/model.hpp"

namespace mvpure {

/// Rule used to pick the joint rank from the spectrum of R N^{-1}.
///  kExcessOverOne: largest i <= l0 with lambda_i - 1 >= threshold (default 1/2,
///                  i.e. lambda_i >= 3/2, where truncation starts to lower MSE).
///  kLiteral:       largest i <= l0 with lambda_i >= threshold. Since every
///                  lambda_i >= 1, a threshold of 1/2 always returns l0.
enum class RankRule { kExcessOverOne, kLiteral };

struct SpectrumThresholds {
  double l0_threshold = 0.1;
  double rank_threshold = 0.5;
  RankRule rank_rule = RankRule::kExcessOverOne;
};

struct SpectrumReport {
  std::vector<double> lambdas;  // descending eigenvalues of R N^{-1}
  int l0_est = 0;
  int r_opt = 0;
  SpectrumThresholds thresholds;
};

/// Eigenvalues of R N^{-1}, computed from the symmetric similar matrix
/// N^{-1/2} R N^{-1/2}. Descending.
std::vector<double> rn_eigenvalues(const Covariance& R, const Covariance& N);

/// Largest i with lambda_i > 1 + threshold; 0 when none.
int estimate_num_sources(const std::vector<double>& lambdas, double l0_threshold = 0.1);

int suggest_rank(const std::vector<double>& lambdas, int l0, double rank_threshold = 0.5,
                 RankRule rule = RankRule::kExcessOverOne);

/// sum_{i=r0+1}^{l0} (lambda_i - 1): the index value given up at the true
/// sources when truncating to rank r0.
double epsilon_resolution_loss(const std::vector<double>& lambdas, int l0, int r0);

SpectrumReport analyze_spectrum(const Covariance& R, const Covariance& N,
                                const SpectrumThresholds& thresholds = {});

}  // namespace mvpure
