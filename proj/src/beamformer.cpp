#include "mvpure/beamformer.hpp"

#include <cctype>
#include <sstream>

#include "mvpure/errors.hpp"

namespace mvpure {
namespace {

void check_full_column_rank(const Matrix& h0) {
  if (h0.cols() < 1 || h0.rows() < h0.cols()) {
    std::ostringstream os;
    os << "gain matrix " << h0.rows() << "x" << h0.cols() << " cannot have full column rank";
    fail(ErrorCode::kRankDeficientSubset, os.str());
  }
  Eigen::JacobiSVD<Matrix> svd(h0);
  const Vector& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-10 * sv(0))) {
    fail(ErrorCode::kRankDeficientSubset, "gain matrix columns are linearly dependent");
  }
}

void check_channels(const Matrix& h0, const Covariance& c) {
  if (c.dim() != h0.rows()) {
    std::ostringstream os;
    os << "gain matrix has " << h0.rows() << " channels but covariance is " << c.dim() << "x" << c.dim();
    fail(ErrorCode::kDimensionMismatch, os.str());
  }
}

SourceSet default_sources(SourceSet sources, Eigen::Index l) {
  if (!sources.empty()) {
    if (sources.size() != l) fail(ErrorCode::kDimensionMismatch, "source set size differs from gain columns");
    return sources;
  }
  std::vector<int> idx(static_cast<std::size_t>(l));
  for (Eigen::Index i = 0; i < l; ++i) idx[static_cast<std::size_t>(i)] = static_cast<int>(i);
  return SourceSet(std::move(idx));
}

// Returns (W_lcmv, H0^t C^{-1} H0).
std::pair<Matrix, Matrix> lcmv_parts(const Matrix& h0, const Covariance& c) {
  check_channels(h0, c);
  check_full_column_rank(h0);
  const Matrix c_inv_h = pd_inverse(c.matrix) * h0;
  const Matrix gram = symmetrized(h0.transpose() * c_inv_h);
  return {pd_inverse(gram) * c_inv_h.transpose(), gram};
}

}  // namespace

std::string_view filter_kind_name(FilterKind kind) {
  switch (kind) {
    case FilterKind::kLcmvR: return "lcmv-r";
    case FilterKind::kLcmvN: return "lcmv-n";
    case FilterKind::kMvpR: return "mvp-r";
    case FilterKind::kMvpN: return "mvp-n";
  }
  return "unknown";
}

FilterKind parse_filter_kind(std::string_view name) {
  std::string norm(name);
  for (auto& c : norm) c = c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (norm == "lcmv-r") return FilterKind::kLcmvR;
  if (norm == "lcmv-n") return FilterKind::kLcmvN;
  if (norm == "mvp-r") return FilterKind::kMvpR;
  if (norm == "mvp-n") return FilterKind::kMvpN;
  fail(ErrorCode::kInvalidArgument, "unknown filter kind '" + std::string(name) + "'");
}

Flavor flavor_of(FilterKind kind) {
  return kind == FilterKind::kLcmvR || kind == FilterKind::kMvpR ? Flavor::kR : Flavor::kN;
}

SpatialFilter make_lcmv(const Matrix& H0, const Covariance& C, Flavor flavor, SourceSet sources) {
  const CovarianceKind expected = flavor == Flavor::kR ? CovarianceKind::kData : CovarianceKind::kNoise;
  if (C.kind != expected) {
    fail(ErrorCode::kInvalidArgument, flavor == Flavor::kR ? "LCMV_R needs the data covariance"
                                                           : "LCMV_N needs the noise covariance");
  }
  SpatialFilter f;
  f.weights = lcmv_parts(H0, C).first;
  f.kind = flavor == Flavor::kR ? FilterKind::kLcmvR : FilterKind::kLcmvN;
  f.rank = static_cast<int>(H0.cols());
  f.source_set = default_sources(std::move(sources), H0.cols());
  f.gain_check = (f.weights * H0 - Matrix::Identity(H0.cols(), H0.cols())).norm();
  return f;
}

SpatialFilter make_mvp(const Matrix& H0, const Covariance& R, const Covariance& N, int r, Flavor flavor,
                       SourceSet sources) {
  const int l = static_cast<int>(H0.cols());
  if (r < 1 || r > l) {
    std::ostringstream os;
    os << "filter rank " << r << " outside [1, " << l << "]";
    fail(ErrorCode::kRankOutOfRange, os.str());
  }
  check_channels(H0, R);
  check_channels(H0, N);
  // S0 for the R flavor, G0 for the N flavor.
  const auto [lcmv, gram] = lcmv_parts(H0, flavor == Flavor::kR ? R : N);
  const Matrix p = top_r_orth_projector(gram, r);
  SpatialFilter f;
  f.weights = p * lcmv;
  f.kind = flavor == Flavor::kR ? FilterKind::kMvpR : FilterKind::kMvpN;
  f.rank = r;
  f.source_set = default_sources(std::move(sources), H0.cols());
  f.gain_check = (f.weights * H0 - p).norm();
  return f;
}

SpatialFilter make_filter(const Matrix& H0, const Covariance& R, const Covariance& N, FilterKind kind,
                          int rank, SourceSet sources) {
  switch (kind) {
    case FilterKind::kLcmvR: return make_lcmv(H0, R, Flavor::kR, std::move(sources));
    case FilterKind::kLcmvN: return make_lcmv(H0, N, Flavor::kN, std::move(sources));
    case FilterKind::kMvpR: return make_mvp(H0, R, N, rank, Flavor::kR, std::move(sources));
    case FilterKind::kMvpN: return make_mvp(H0, R, N, rank, Flavor::kN, std::move(sources));
  }
  fail(ErrorCode::kInvalidArgument, "unknown filter kind");
}

Matrix apply_filter(const SpatialFilter& filter, const Matrix& data) {
  if (data.rows() != filter.weights.cols()) {
    std::ostringstream os;
    os << "filter expects " << filter.weights.cols() << " channels, data has " << data.rows();
    fail(ErrorCode::kDimensionMismatch, os.str());
  }
  return filter.weights * data;
}

std::vector<Matrix> apply_filter(const SpatialFilter& filter, const Epochs& epochs) {
  std::vector<Matrix> out;
  out.reserve(epochs.data.size());
  for (const auto& e : epochs.data) out.push_back(apply_filter(filter, e));
  return out;
}

Matrix whitened_gain(const Scenario& scenario) {
  return scenario.H0() * psd_power(scenario.Q0, MatrixPower::kSqrt);
}

double filter_mse(const SpatialFilter& filter, const Scenario& scenario, MseForm form) {
  if (filter.source_set != scenario.true_sources) {
    fail(ErrorCode::kSourceSetMismatch, "filter was not built for the scenario's true sources");
  }
  const Matrix& w = filter.weights;
  if (w.cols() != scenario.R.dim()) fail(ErrorCode::kDimensionMismatch, "filter and scenario channel counts differ");
  const double output_power = (w * scenario.R.matrix * w.transpose()).trace();
  if (form == MseForm::kRaw) {
    return output_power - 2.0 * (w * scenario.H0() * scenario.Q0).trace() + scenario.Q0.trace();
  }
  return output_power - 2.0 * (w * whitened_gain(scenario)).trace() + scenario.l0();
}

}  // namespace mvpure
