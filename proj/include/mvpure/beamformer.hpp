#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mvpure/model.hpp"

namespace mvpure {

enum class FilterKind { kLcmvR, kLcmvN, kMvpR, kMvpN };
enum class Flavor { kR, kN };

std::string_view filter_kind_name(FilterKind kind);
/// Accepts "lcmv-r", "lcmv-n", "mvp-r", "mvp-n" (underscores allowed).
FilterKind parse_filter_kind(std::string_view name);
Flavor flavor_of(FilterKind kind);

/// l x m spatial filter W mapping sensor data to source estimates.
struct SpatialFilter {
  Matrix weights;
  FilterKind kind = FilterKind::kLcmvR;
  int rank = 0;
  SourceSet source_set;
  // ||W H0 - E||_F at build time, E = I for LCMV and the rank-r projector for MV-PURE.
  double gain_check = 0.0;
};

/// W = (H0^t C^{-1} H0)^{-1} H0^t C^{-1} with C = R (flavor kR, data
/// covariance) or C = N (flavor kN, noise covariance).
SpatialFilter make_lcmv(const Matrix& H0, const Covariance& C, Flavor flavor, SourceSet sources = {});

/// Rank-r MV-PURE filter W = P W_lcmv. P projects onto the top-r eigenvectors
/// of S0 = H0^t R^{-1} H0 (flavor kR) or G0 = H0^t N^{-1} H0 (flavor kN).
/// At r = l this is the LCMV filter.
SpatialFilter make_mvp(const Matrix& H0, const Covariance& R, const Covariance& N, int r, Flavor flavor,
                       SourceSet sources = {});

/// Dispatch on kind; `rank` is ignored for the LCMV kinds.
SpatialFilter make_filter(const Matrix& H0, const Covariance& R, const Covariance& N, FilterKind kind,
                          int rank, SourceSet sources = {});

Matrix apply_filter(const SpatialFilter& filter, const Matrix& data);
std::vector<Matrix> apply_filter(const SpatialFilter& filter, const Epochs& epochs);

enum class MseForm {
  // tr(W R W^t) - 2 tr(W H0 Q0) + tr(Q0): error against q0.
  kRaw,
  // tr(W R W^t) - 2 tr(W H0 Q0^{1/2}) + l0: error against the whitened
  // sources Q0^{-1/2} q0. Filters meant for this form are built on the
  // whitened gain H0 Q0^{1/2} (see whitened_gain).
  kWhitened,
};

/// Reconstruction MSE of a filter against the scenario's true sources.
double filter_mse(const SpatialFilter& filter, const Scenario& scenario, MseForm form = MseForm::kRaw);

/// H0 Q0^{1/2}.
Matrix whitened_gain(const Scenario& scenario);

}  // namespace mvpure
