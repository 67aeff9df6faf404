#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvpure/numerics.hpp"

namespace mvpure {

/// Ordered list of distinct candidate-source indices.
class SourceSet {
 public:
  SourceSet() = default;
  explicit SourceSet(std::vector<int> indices);

  const std::vector<int>& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  int operator[](int i) const { return indices_[static_cast<std::size_t>(i)]; }
  bool contains(int index) const;

  /// Copy with `index` appended.
  SourceSet with(int index) const;
  /// Indices in ascending order, for order-insensitive comparison.
  std::vector<int> sorted() const;
  bool same_set(const SourceSet& other) const { return sorted() == other.sorted(); }

  /// Throws unless every index lies in [0, num_sources) and size() <= num_channels.
  void validate(int num_sources, int num_channels) const;

  friend bool operator==(const SourceSet&, const SourceSet&) = default;

 private:
  std::vector<int> indices_;
};

/// m x s sensor gains, one column per fixed-orientation candidate source.
struct LeadField {
  Matrix gains;
  std::vector<std::string> channel_names;
  std::vector<Eigen::Vector3d> source_positions;  // empty when index-only

  int num_channels() const { return static_cast<int>(gains.rows()); }
  int num_sources() const { return static_cast<int>(gains.cols()); }

  /// Validates shape, metadata sizes and that no column is all-zero. Channel
  /// names default to "ch000", "ch001", ...
  static LeadField from_gains(Matrix gains, std::vector<std::string> channel_names = {},
                              std::vector<Eigen::Vector3d> source_positions = {});
};

enum class CovarianceKind { kData, kNoise };

struct Regularization {
  double gamma = 0.0;
  bool applied = false;
};

struct Covariance {
  Matrix matrix;
  CovarianceKind kind = CovarianceKind::kData;
  Regularization regularization;
  std::int64_t n_samples = 0;  // 0 for analytic

  /// Checks squareness and symmetry (1e-10 relative), then stores the
  /// exactly symmetrized matrix.
  static Covariance make(Matrix matrix, CovarianceKind kind, std::int64_t n_samples = 0);

  int dim() const { return static_cast<int>(matrix.rows()); }
  double smallest_eigenvalue() const;
  bool is_strictly_pd() const;
};

/// n_epochs x m x n_times recording; sample k of every epoch sits at t0 + k / sfreq.
struct Epochs {
  std::vector<Matrix> data;  // each m x n_times
  double sfreq = 1.0;
  double t0 = 0.0;

  static Epochs make(std::vector<Matrix> data, double sfreq, double t0);
  int num_channels() const { return data.empty() ? 0 : static_cast<int>(data.front().rows()); }
  int num_times() const { return data.empty() ? 0 : static_cast<int>(data.front().cols()); }
  double time_of(int sample) const { return t0 + sample / sfreq; }
};

/// Fully specified synthetic ground truth with R = H0 Q0 H0^t + N.
struct Scenario {
  LeadField leadfield;
  SourceSet true_sources;
  Matrix Q0;
  Covariance N;
  Covariance R;
  std::uint64_t seed = 0;

  Matrix H0() const;
  int l0() const { return true_sources.size(); }
};

/// Columns of L.gains picked by theta, in theta's order. Fails with
/// RankDeficientSubset when sigma_min <= 1e-10 sigma_max.
Matrix subset_leadfield(const LeadField& leadfield, const SourceSet& theta);
Matrix subset_columns(const Matrix& gains, const SourceSet& theta);

/// Unbiased covariance of all in-window samples across epochs, after removing
/// the per-channel mean of the pooled window samples.
Covariance sample_covariance(const Epochs& epochs, double t_start, double t_end,
                             CovarianceKind kind = CovarianceKind::kData);

/// C + gamma * (trace(C) / m) * I.
Covariance regularize(const Covariance& c, double gamma);

enum class NoiseKind { kWhite, kSeededSpd };

struct ScenarioParams {
  int m = 32;
  int s = 12;
  int l0 = 2;
  std::vector<double> source_snr{3.0, 2.0};
  NoiseKind noise = NoiseKind::kWhite;
  double correlation = 0.0;
  std::uint64_t seed = 0;
  // Minimum angle (degrees) between any true-source column and every other
  // lead-field column; 0 disables the guard.
  double min_separation_deg = 0.0;
};

Scenario synth_scenario(const ScenarioParams& params);

/// Draws n_samples of y = H0 q0 + n with q0 ~ N(0, Q0), n ~ N(0, N). The
/// first `n_baseline` samples carry noise only (times t < 0 at the given
/// sampling rate); the remaining ones include the sources.
Epochs simulate_epochs(const Scenario& scenario, int n_epochs, int n_baseline, int n_active,
                       double sfreq, std::uint64_t seed);

/// Exact covariances when the noise leaks the sources: n = n_indep + K q0 with
/// a seeded m x l0 coupling K scaled by `coupling`. Returns {R, N} where
/// N = N_indep + K Q0 K^t and R = (H0 + K) Q0 (H0 + K)^t + N_indep, so that
/// E[q0 n^t] = Q0 K^t != 0.
std::pair<Covariance, Covariance> coupled_covariances(const Scenario& scenario, double coupling,
                                                      std::uint64_t seed);

/// Smallest angle (degrees) between the lines spanned by two vectors.
double principal_angle_deg(const Vector& a, const Vector& b);

}  // namespace mvpure
