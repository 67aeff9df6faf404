#include "mvpure/spectrum.hpp"

#include <sstream>

#include "mvpure/errors.hpp"

namespace mvpure {

std::vector<double> rn_eigenvalues(const Covariance& R, const Covariance& N) {
  if (R.dim() != N.dim()) {
    std::ostringstream os;
    os << "data covariance is " << R.dim() << "x" << R.dim() << " but noise covariance is " << N.dim()
       << "x" << N.dim();
    fail(ErrorCode::kDimensionMismatch, os.str());
  }
  const Matrix n_inv_sqrt = psd_power(N.matrix, MatrixPower::kInvSqrt);
  const Vector values = sym_eigenvalues(symmetrized(n_inv_sqrt * R.matrix * n_inv_sqrt));
  return {values.data(), values.data() + values.size()};
}

int estimate_num_sources(const std::vector<double>& lambdas, double l0_threshold) {
  int count = 0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] > 1.0 + l0_threshold) count = static_cast<int>(i) + 1;
  }
  return count;
}

int suggest_rank(const std::vector<double>& lambdas, int l0, double rank_threshold, RankRule rule) {
  if (l0 < 0 || l0 > static_cast<int>(lambdas.size())) {
    fail(ErrorCode::kRankOutOfRange, "l0 = " + std::to_string(l0) + " outside the spectrum length");
  }
  int rank = 0;
  for (int i = 0; i < l0; ++i) {
    const double lambda = lambdas[static_cast<std::size_t>(i)];
    const bool keep = rule == RankRule::kExcessOverOne ? lambda - 1.0 >= rank_threshold
                                                       : lambda >= rank_threshold;
    if (keep) rank = i + 1;
  }
  return rank;
}

double epsilon_resolution_loss(const std::vector<double>& lambdas, int l0, int r0) {
  if (r0 < 1 || r0 > l0 || l0 > static_cast<int>(lambdas.size())) {
    std::ostringstream os;
    os << "need 1 <= r0 <= l0 <= " << lambdas.size() << ", got r0=" << r0 << " l0=" << l0;
    fail(ErrorCode::kRankOutOfRange, os.str());
  }
  double eps = 0.0;
  for (int i = r0; i < l0; ++i) eps += lambdas[static_cast<std::size_t>(i)] - 1.0;
  return eps;
}

SpectrumReport analyze_spectrum(const Covariance& R, const Covariance& N,
                                const SpectrumThresholds& thresholds) {
  SpectrumReport report;
  report.thresholds = thresholds;
  report.lambdas = rn_eigenvalues(R, N);
  report.l0_est = estimate_num_sources(report.lambdas, thresholds.l0_threshold);
  report.r_opt = suggest_rank(report.lambdas, report.l0_est, thresholds.rank_threshold, thresholds.rank_rule);
  return report;
}

}  // namespace mvpure
