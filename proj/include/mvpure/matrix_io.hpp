#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mvpure/model.hpp"

namespace mvpure::io {

/// Dense tensor as stored in an MVPM1 container.
///
/// Layout (all little-endian):
///   5 bytes   magic "MVPM1"
///   u32       rank
///   u64[rank] dims
///   f64[...]  payload, row-major (last index fastest)
struct Tensor {
  std::vector<std::uint64_t> dims;
  std::vector<double> values;

  std::uint64_t element_count() const;
};

void write_tensor(const std::filesystem::path& path, const Tensor& tensor);
Tensor read_tensor(const std::filesystem::path& path);

void write_matrix(const std::filesystem::path& path, const Matrix& matrix);
Matrix read_matrix(const std::filesystem::path& path);  // requires rank 2

/// Comma-separated rows, values printed with 17 significant digits.
void write_csv(const std::filesystem::path& path, const Matrix& matrix);
Matrix read_csv(const std::filesystem::path& path);

/// Dispatches on extension: ".csv" is text, anything else MVPM1.
Matrix load_matrix_any(const std::filesystem::path& path);

/// Epochs as a rank-3 MVPM1 tensor (n_epochs x m x n_times) plus a JSON
/// sidecar `<path>.json` holding {"sfreq", "t0"}. A rank-2 file is read as a
/// single epoch.
void write_epochs(const std::filesystem::path& path, const Epochs& epochs);
Epochs read_epochs(const std::filesystem::path& path);
Epochs read_epochs(const std::filesystem::path& path, double sfreq, double t0);

/// Scenario directory: leadfield.mvpm, Q0.mvpm, N.mvpm, R.mvpm and a
/// manifest.json with keys leadfield, true_sources, Q0, N, R, seed.
void write_scenario(const std::filesystem::path& dir, const Scenario& scenario);
Scenario read_scenario(const std::filesystem::path& dir);

}  // namespace mvpure::io
