#include "mvpure/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "mvpure/errors.hpp"

namespace mvpure {

// ---------------------------------------------------------------- SourceSet

SourceSet::SourceSet(std::vector<int> indices) : indices_(std::move(indices)) {
  std::set<int> seen;
  for (int idx : indices_) {
    if (idx < 0) {
      fail(ErrorCode::kInvalidArgument, "source index " + std::to_string(idx) + " is negative");
    }
    if (!seen.insert(idx).second) {
      fail(ErrorCode::kInvalidArgument, "source index " + std::to_string(idx) + " appears twice");
    }
  }
}

bool SourceSet::contains(int index) const {
  return std::find(indices_.begin(), indices_.end(), index) != indices_.end();
}

SourceSet SourceSet::with(int index) const {
  std::vector<int> next = indices_;
  next.push_back(index);
  return SourceSet(std::move(next));
}

std::vector<int> SourceSet::sorted() const {
  std::vector<int> out = indices_;
  std::sort(out.begin(), out.end());
  return out;
}

void SourceSet::validate(int num_sources, int num_channels) const {
  for (int idx : indices_) {
    if (idx >= num_sources) {
      std::ostringstream os;
      os << "source index " << idx << " out of range for " << num_sources << " candidates";
      fail(ErrorCode::kInvalidArgument, os.str());
    }
  }
  if (size() > num_channels) {
    std::ostringstream os;
    os << "source set of size " << size() << " exceeds channel count " << num_channels;
    fail(ErrorCode::kInfeasibleDimensions, os.str());
  }
}

// ---------------------------------------------------------------- LeadField

LeadField LeadField::from_gains(Matrix gains, std::vector<std::string> channel_names,
                                std::vector<Eigen::Vector3d> source_positions) {
  if (gains.rows() < 2 || gains.cols() < 1) {
    std::ostringstream os;
    os << "lead field must be at least 2x1, got " << gains.rows() << "x" << gains.cols();
    fail(ErrorCode::kInfeasibleDimensions, os.str());
  }
  if (!gains.allFinite()) fail(ErrorCode::kInvalidArgument, "lead field has non-finite entries");
  for (Eigen::Index j = 0; j < gains.cols(); ++j) {
    if (gains.col(j).cwiseAbs().maxCoeff() == 0.0) {
      fail(ErrorCode::kInvalidArgument, "lead-field column " + std::to_string(j) + " is all zero");
    }
  }
  if (channel_names.empty()) {
    for (Eigen::Index i = 0; i < gains.rows(); ++i) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "ch%03d", static_cast<int>(i));
      channel_names.emplace_back(buf);
    }
  } else if (static_cast<Eigen::Index>(channel_names.size()) != gains.rows()) {
    fail(ErrorCode::kDimensionMismatch, "channel name count does not match lead-field rows");
  }
  if (!source_positions.empty() &&
      static_cast<Eigen::Index>(source_positions.size()) != gains.cols()) {
    fail(ErrorCode::kDimensionMismatch, "source position count does not match lead-field columns");
  }
  return LeadField{std::move(gains), std::move(channel_names), std::move(source_positions)};
}

// ---------------------------------------------------------------- Covariance

Covariance Covariance::make(Matrix matrix, CovarianceKind kind, std::int64_t n_samples) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1) {
    std::ostringstream os;
    os << "covariance must be square, got " << matrix.rows() << "x" << matrix.cols();
    fail(ErrorCode::kDimensionMismatch, os.str());
  }
  if (!is_symmetric(matrix, 1e-10)) {
    fail(ErrorCode::kNotSymmetric, "covariance asymmetry exceeds 1e-10 * ||C||_F");
  }
  Covariance c;
  c.matrix = symmetrized(matrix);
  c.kind = kind;
  c.n_samples = n_samples;
  return c;
}

double Covariance::smallest_eigenvalue() const {
  const Vector values = sym_eigenvalues(matrix);
  return values(values.size() - 1);
}

bool Covariance::is_strictly_pd() const {
  const Vector values = sym_eigenvalues(matrix);
  return values(0) > 0.0 && values(values.size() - 1) > tolerance::kPsd * values(0);
}

// ---------------------------------------------------------------- Epochs

Epochs Epochs::make(std::vector<Matrix> data, double sfreq, double t0) {
  if (data.empty()) fail(ErrorCode::kInvalidArgument, "epochs need at least one epoch");
  if (!(sfreq > 0.0)) fail(ErrorCode::kInvalidArgument, "sampling frequency must be positive");
  const auto m = data.front().rows();
  const auto n = data.front().cols();
  if (n < 2) fail(ErrorCode::kInvalidArgument, "epochs need at least two time samples");
  for (const auto& e : data) {
    if (e.rows() != m || e.cols() != n) {
      fail(ErrorCode::kDimensionMismatch, "all epochs must share the same shape");
    }
  }
  return Epochs{std::move(data), sfreq, t0};
}

// ---------------------------------------------------------------- Scenario

Matrix Scenario::H0() const { return subset_columns(leadfield.gains, true_sources); }

// ---------------------------------------------------------------- operations

Matrix subset_columns(const Matrix& gains, const SourceSet& theta) {
  Matrix out(gains.rows(), theta.size());
  for (int j = 0; j < theta.size(); ++j) {
    if (theta[j] >= gains.cols()) {
      fail(ErrorCode::kInvalidArgument, "source index " + std::to_string(theta[j]) + " out of range");
    }
    out.col(j) = gains.col(theta[j]);
  }
  return out;
}

Matrix subset_leadfield(const LeadField& leadfield, const SourceSet& theta) {
  theta.validate(leadfield.num_sources(), leadfield.num_channels());
  if (theta.empty()) fail(ErrorCode::kInvalidArgument, "empty source set");
  Matrix h = subset_columns(leadfield.gains, theta);
  Eigen::JacobiSVD<Matrix> svd(h);
  const Vector& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-10 * sv(0))) {
    std::ostringstream os;
    os << "lead-field columns for sources [";
    for (int j = 0; j < theta.size(); ++j) os << (j ? "," : "") << theta[j];
    os << "] are linearly dependent (sigma_min / sigma_max = " << sv(sv.size() - 1) / sv(0) << ")";
    fail(ErrorCode::kRankDeficientSubset, os.str());
  }
  return h;
}

Covariance sample_covariance(const Epochs& epochs, double t_start, double t_end, CovarianceKind kind) {
  if (epochs.data.empty()) fail(ErrorCode::kEmptyWindow, "no epochs");
  if (!(t_end >= t_start)) {
    std::ostringstream os;
    os << "window [" << t_start << ", " << t_end << "] is empty";
    fail(ErrorCode::kEmptyWindow, os.str());
  }
  const double slack = 1e-9 / epochs.sfreq;
  std::vector<int> samples;
  for (int k = 0; k < epochs.num_times(); ++k) {
    const double t = epochs.time_of(k);
    if (t >= t_start - slack && t <= t_end + slack) samples.push_back(k);
  }
  if (samples.empty()) {
    std::ostringstream os;
    os << "window [" << t_start << ", " << t_end << "] contains no samples (epoch spans "
       << epochs.time_of(0) << " to " << epochs.time_of(epochs.num_times() - 1) << ")";
    fail(ErrorCode::kEmptyWindow, os.str());
  }
  const std::int64_t total = static_cast<std::int64_t>(samples.size()) *
                             static_cast<std::int64_t>(epochs.data.size());
  if (total < 2) fail(ErrorCode::kTooFewSamples, "covariance needs at least two samples");

  const int m = epochs.num_channels();
  Vector mean = Vector::Zero(m);
  for (const auto& e : epochs.data) {
    for (int k : samples) mean += e.col(k);
  }
  mean /= static_cast<double>(total);

  Matrix centered(m, total);
  Eigen::Index col = 0;
  for (const auto& e : epochs.data) {
    for (int k : samples) centered.col(col++) = e.col(k) - mean;
  }
  Matrix cov = (centered * centered.transpose()) / static_cast<double>(total - 1);
  return Covariance::make(symmetrized(cov), kind, total);
}

Covariance regularize(const Covariance& c, double gamma) {
  if (gamma < 0.0 || !std::isfinite(gamma)) {
    fail(ErrorCode::kNegativeGamma, "regularization factor must be >= 0, got " + std::to_string(gamma));
  }
  Covariance out = c;
  const double m = static_cast<double>(c.matrix.rows());
  const double load = gamma * c.matrix.trace() / m;
  out.matrix.diagonal().array() += load;
  out.regularization.gamma = gamma;
  out.regularization.applied = true;
  return out;
}

double principal_angle_deg(const Vector& a, const Vector& b) {
  const double c = std::min(1.0, std::abs(a.dot(b)) / (a.norm() * b.norm()));
  return std::acos(c) * 180.0 / std::numbers::pi;
}

namespace {

Vector random_unit(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(m);
  do {
    for (int i = 0; i < m; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-8);
  return v / v.norm();
}

Matrix random_gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) out(i, j) = normal(rng);
  return out;
}

Matrix cholesky_factor(const Matrix& a, const char* what) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::kNotPositiveDefinite, std::string(what) + " has no Cholesky factor");
  }
  return llt.matrixL();
}

bool well_conditioned(const Matrix& h0) {
  Eigen::JacobiSVD<Matrix> svd(h0);
  const Vector& sv = svd.singularValues();
  return sv(sv.size() - 1) > 0.05 * sv(0);
}

}  // namespace

Scenario synth_scenario(const ScenarioParams& p) {
  if (p.m < 2 || p.s < 1 || p.l0 < 1 || p.l0 > std::min(p.m - 1, p.s)) {
    std::ostringstream os;
    os << "need 1 <= l0 <= min(m - 1, s); got m=" << p.m << " s=" << p.s << " l0=" << p.l0;
    fail(ErrorCode::kInfeasibleDimensions, os.str());
  }
  if (static_cast<int>(p.source_snr.size()) != p.l0) {
    std::ostringstream os;
    os << "source_snr has " << p.source_snr.size() << " entries but l0 is " << p.l0;
    fail(ErrorCode::kInvalidArgument, os.str());
  }
  for (double q : p.source_snr) {
    if (!(q > 0.0) || !std::isfinite(q)) fail(ErrorCode::kInvalidArgument, "source_snr entries must be positive");
  }
  if (!(p.correlation >= 0.0 && p.correlation < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "correlation must lie in [0, 1)");
  }
  if (p.min_separation_deg < 0.0 || p.min_separation_deg >= 90.0) {
    fail(ErrorCode::kInvalidArgument, "separation guard must lie in [0, 90) degrees");
  }

  std::mt19937_64 rng(p.seed);
  Matrix gains(p.m, p.s);
  for (int j = 0; j < p.s; ++j) gains.col(j) = random_unit(rng, p.m);

  std::vector<int> order(static_cast<std::size_t>(p.s));
  for (int i = 0; i < p.s; ++i) order[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < p.l0; ++i) {
    std::uniform_int_distribution<int> pick(i, p.s - 1);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
  }
  std::vector<int> truth(order.begin(), order.begin() + p.l0);
  const SourceSet true_sources(truth);

  constexpr int kMaxRedraws = 100000;
  int redraws = 0;
  for (;;) {
    bool changed = false;
    if (p.min_separation_deg > 0.0) {
      for (int t : truth) {
        for (int k = 0; k < p.s; ++k) {
          if (k == t) continue;
          if (principal_angle_deg(gains.col(t), gains.col(k)) < p.min_separation_deg) {
            const int victim = true_sources.contains(k) ? t : k;
            gains.col(victim) = random_unit(rng, p.m);
            changed = true;
          }
        }
      }
    }
    if (!well_conditioned(subset_columns(gains, true_sources))) {
      for (int t : truth) gains.col(t) = random_unit(rng, p.m);
      changed = true;
    }
    if (!changed) break;
    if (++redraws > kMaxRedraws) {
      fail(ErrorCode::kInfeasibleDimensions, "could not draw a lead field meeting the conditioning guards");
    }
  }

  Matrix q0(p.l0, p.l0);
  for (int i = 0; i < p.l0; ++i) {
    for (int j = 0; j < p.l0; ++j) {
      const double qi = p.source_snr[static_cast<std::size_t>(i)];
      const double qj = p.source_snr[static_cast<std::size_t>(j)];
      q0(i, j) = i == j ? qi * qi : p.correlation * qi * qj;
    }
  }
  const Vector q_eigs = sym_eigenvalues(q0);
  if (!(q_eigs(p.l0 - 1) > 1e-12 * q_eigs(0))) {
    fail(ErrorCode::kQ0NotPD, "source covariance is not positive definite for the requested correlation");
  }

  Matrix noise;
  if (p.noise == NoiseKind::kWhite) {
    noise = Matrix::Identity(p.m, p.m);
  } else {
    const Matrix b = random_gaussian(rng, p.m, p.m);
    noise = 0.5 * (b * b.transpose()) / static_cast<double>(p.m) + 0.5 * Matrix::Identity(p.m, p.m);
    noise *= static_cast<double>(p.m) / noise.trace();
    noise = symmetrized(noise);
  }

  Scenario sc;
  sc.leadfield = LeadField::from_gains(std::move(gains));
  sc.true_sources = true_sources;
  sc.Q0 = q0;
  sc.N = Covariance::make(noise, CovarianceKind::kNoise);
  const Matrix h0 = sc.H0();
  sc.R = Covariance::make(symmetrized(h0 * q0 * h0.transpose() + noise), CovarianceKind::kData);
  sc.seed = p.seed;
  return sc;
}

Epochs simulate_epochs(const Scenario& sc, int n_epochs, int n_baseline, int n_active, double sfreq,
                       std::uint64_t seed) {
  if (n_epochs < 1 || n_baseline < 0 || n_active < 0 || n_baseline + n_active < 2) {
    fail(ErrorCode::kInvalidArgument, "simulation needs at least one epoch of two samples");
  }
  std::mt19937_64 rng(seed);
  const Matrix q_chol = cholesky_factor(sc.Q0, "Q0");
  const Matrix n_chol = cholesky_factor(sc.N.matrix, "N");
  const Matrix h0 = sc.H0();
  const int m = sc.leadfield.num_channels();
  const int total = n_baseline + n_active;
  std::vector<Matrix> data;
  data.reserve(static_cast<std::size_t>(n_epochs));
  for (int e = 0; e < n_epochs; ++e) {
    Matrix epoch = n_chol * random_gaussian(rng, m, total);
    if (n_active > 0) {
      epoch.rightCols(n_active) += h0 * (q_chol * random_gaussian(rng, sc.l0(), n_active));
    }
    data.push_back(std::move(epoch));
  }
  return Epochs::make(std::move(data), sfreq, -static_cast<double>(n_baseline) / sfreq);
}

std::pair<Covariance, Covariance> coupled_covariances(const Scenario& sc, double coupling,
                                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int m = sc.leadfield.num_channels();
  const Matrix k = coupling * random_gaussian(rng, m, sc.l0()) / std::sqrt(static_cast<double>(m));
  const Matrix h0 = sc.H0();
  const Matrix mixed = h0 + k;
  Matrix noise = sc.N.matrix + k * sc.Q0 * k.transpose();
  Matrix data = mixed * sc.Q0 * mixed.transpose() + sc.N.matrix;
  return {Covariance::make(symmetrized(data), CovarianceKind::kData),
          Covariance::make(symmetrized(noise), CovarianceKind::kNoise)};
}

}  // namespace mvpure
