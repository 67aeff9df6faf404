#pragma once

#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "mvpure/errors.hpp"
#include "mvpure/model.hpp"

namespace testing {

using mvpure::Matrix;
using mvpure::Vector;

inline Matrix gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) a(i, j) = g(rng);
  return a;
}

inline Matrix random_spd(std::mt19937_64& rng, int n, double floor = 0.5) {
  const Matrix b = gaussian(rng, n, n);
  return b * b.transpose() / n + floor * Matrix::Identity(n, n);
}

inline Matrix random_symmetric(std::mt19937_64& rng, int n) {
  const Matrix b = gaussian(rng, n, n);
  return 0.5 * (b + b.transpose());
}

inline double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

/// Runs `fn` and returns the ErrorCode it throws; fails the test if it
/// returns normally.
template <typename Fn>
mvpure::ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (const mvpure::Error& e) {
    return e.code();
  }
  FAIL("expected an mvpure::Error");
  return mvpure::ErrorCode::kInvalidArgument;
}

inline mvpure::Scenario scenario(int m, int s, int l0, std::uint64_t seed, double separation = 0.0,
                                 mvpure::NoiseKind noise = mvpure::NoiseKind::kSeededSpd,
                                 std::vector<double> snr = {}) {
  mvpure::ScenarioParams p;
  p.m = m;
  p.s = s;
  p.l0 = l0;
  if (snr.empty())
    for (int j = 0; j < l0; ++j) snr.push_back(3.0 - 0.4 * j);
  p.source_snr = snr;
  p.seed = seed;
  p.noise = noise;
  p.min_separation_deg = separation;
  return mvpure::synth_scenario(p);
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("mvpure_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
