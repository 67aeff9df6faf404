#include "helpers.hpp"
#include "mvpure/spectrum.hpp"

using namespace mvpure;
using testing::error_of;

TEST_SUITE("spectrum") {
  TEST_CASE("R = N gives a flat spectrum") {
    std::mt19937_64 rng(1);
    const Covariance n = Covariance::make(testing::random_spd(rng, 5), CovarianceKind::kNoise);
    const Covariance r = Covariance::make(n.matrix, CovarianceKind::kData);
    for (double l : rn_eigenvalues(r, n)) CHECK(l == doctest::Approx(1.0).epsilon(1e-12));
    const SpectrumReport rep = analyze_spectrum(r, n);
    CHECK(rep.l0_est == 0);
    CHECK(rep.r_opt == 0);
  }

  TEST_CASE("rank-one source with q |h|^2 = 2 on white noise") {
    Vector h = Vector::Zero(6);
    h(0) = 1.0;
    h(3) = 1.0;
    h /= h.norm();
    const Covariance n = Covariance::make(Matrix::Identity(6, 6), CovarianceKind::kNoise);
    const Covariance r = Covariance::make(2.0 * h * h.transpose() + Matrix::Identity(6, 6), CovarianceKind::kData);
    const auto lambdas = rn_eigenvalues(r, n);
    CHECK(lambdas[0] == doctest::Approx(3.0));
    for (std::size_t i = 1; i < lambdas.size(); ++i) CHECK(lambdas[i] == doctest::Approx(1.0));
    CHECK(estimate_num_sources(lambdas, 0.1) == 1);
  }

  TEST_CASE("exact scenarios expose l0 eigenvalues above one") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const Scenario sc = testing::scenario(12, 9, 3, seed);
      const auto lambdas = rn_eigenvalues(sc.R, sc.N);
      for (int i = 0; i < 3; ++i) CHECK(lambdas[static_cast<std::size_t>(i)] > 1.0 + 1e-9);
      for (std::size_t i = 3; i < lambdas.size(); ++i) CHECK(std::abs(lambdas[i] - 1.0) < 1e-9);
      CHECK(estimate_num_sources(lambdas, 1e-6) == 3);
    }
  }

  TEST_CASE("estimate_num_sources thresholds") {
    CHECK(estimate_num_sources({3, 1, 1}, 0.1) == 1);
    CHECK(estimate_num_sources({1, 1, 1}, 0.1) == 0);
    CHECK(estimate_num_sources({5, 2, 1.05, 1.0}, 0.1) == 2);
    CHECK(estimate_num_sources({}, 0.1) == 0);
  }

  TEST_CASE("suggest_rank under both rules") {
    CHECK(suggest_rank({4, 3, 1.2, 1.0}, 3) == 2);
    CHECK(suggest_rank({1, 1, 1}, 0) == 0);
    CHECK(suggest_rank({1.4, 1.3}, 2) == 0);
    CHECK(suggest_rank({4, 3, 1.2, 1.0}, 3, 0.5, RankRule::kLiteral) == 3);
    CHECK(suggest_rank({4, 3, 1.2, 1.0}, 3, 2.5, RankRule::kLiteral) == 2);
    CHECK(suggest_rank({4, 3, 1.2, 1.0}, 1) == 1);
    CHECK(error_of([] { suggest_rank({2, 1}, 3); }) == ErrorCode::kRankOutOfRange);
    CHECK(error_of([] { suggest_rank({2, 1}, -1); }) == ErrorCode::kRankOutOfRange);
  }

  TEST_CASE("epsilon_resolution_loss sums the discarded excess") {
    CHECK(epsilon_resolution_loss({4, 2, 1.1}, 3, 3) == 0.0);
    CHECK(epsilon_resolution_loss({4, 2, 1.1}, 3, 1) == doctest::Approx(1.1));
    CHECK(epsilon_resolution_loss({1, 1, 1, 1}, 4, 2) == 0.0);
    CHECK(error_of([] { epsilon_resolution_loss({4, 2}, 2, 0); }) == ErrorCode::kRankOutOfRange);
    CHECK(error_of([] { epsilon_resolution_loss({4, 2}, 3, 1); }) == ErrorCode::kRankOutOfRange);
    CHECK(error_of([] { epsilon_resolution_loss({4, 2}, 1, 2); }) == ErrorCode::kRankOutOfRange);
  }

  TEST_CASE("report invariants") {
    const Scenario sc = testing::scenario(10, 8, 2, 4, 0.0, NoiseKind::kSeededSpd, {3.0, 0.5});
    const SpectrumReport rep = analyze_spectrum(sc.R, sc.N, {1e-6, 0.5, RankRule::kExcessOverOne});
    CHECK(rep.l0_est == 2);
    CHECK(rep.r_opt <= rep.l0_est);
    for (std::size_t i = 1; i < rep.lambdas.size(); ++i) CHECK(rep.lambdas[i - 1] >= rep.lambdas[i]);
    CHECK(rep.lambdas.back() > 0.0);
  }

  TEST_CASE("dimension mismatch") {
    const Covariance a = Covariance::make(Matrix::Identity(3, 3), CovarianceKind::kData);
    const Covariance b = Covariance::make(Matrix::Identity(4, 4), CovarianceKind::kNoise);
    CHECK(error_of([&] { rn_eigenvalues(a, b); }) == ErrorCode::kDimensionMismatch);
    const Covariance z = Covariance::make(Matrix::Zero(3, 3), CovarianceKind::kNoise);
    CHECK(error_of([&] { rn_eigenvalues(a, z); }) == ErrorCode::kNotPositiveDefinite);
  }
}
