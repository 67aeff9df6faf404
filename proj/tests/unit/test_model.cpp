#include "helpers.hpp"
#include "mvpure/model.hpp"

using namespace mvpure;
using testing::error_of;
using testing::max_abs;

TEST_SUITE("model") {
  TEST_CASE("SourceSet keeps order and rejects duplicates or negatives") {
    const SourceSet s({4, 1, 7});
    CHECK(s.size() == 3);
    CHECK(s[0] == 4);
    CHECK(s.contains(7));
    CHECK_FALSE(s.contains(2));
    CHECK(s.sorted() == std::vector<int>{1, 4, 7});
    CHECK(s.with(2).indices() == std::vector<int>{4, 1, 7, 2});
    CHECK(s.same_set(SourceSet({7, 4, 1})));
    CHECK_FALSE(s == SourceSet({7, 4, 1}));
    CHECK(error_of([] { SourceSet({1, 1}); }) == ErrorCode::kInvalidArgument);
    CHECK(error_of([] { SourceSet({-1}); }) == ErrorCode::kInvalidArgument);
    CHECK(error_of([&] { s.with(4); }) == ErrorCode::kInvalidArgument);
    CHECK(error_of([&] { s.validate(7, 10); }) == ErrorCode::kInvalidArgument);
    CHECK(error_of([&] { s.validate(8, 2); }) == ErrorCode::kInfeasibleDimensions);
    s.validate(8, 3);
  }

  TEST_CASE("LeadField validation and defaults") {
    const LeadField lf = LeadField::from_gains(Matrix::Identity(3, 2));
    CHECK(lf.num_channels() == 3);
    CHECK(lf.num_sources() == 2);
    CHECK(lf.channel_names == std::vector<std::string>{"ch000", "ch001", "ch002"});
    Matrix zero_col = Matrix::Identity(3, 2);
    zero_col.col(1).setZero();
    CHECK(error_of([&] { LeadField::from_gains(zero_col); }) == ErrorCode::kInvalidArgument);
    CHECK(error_of([] { LeadField::from_gains(Matrix::Ones(1, 2)); }) == ErrorCode::kInfeasibleDimensions);
    CHECK(error_of([] { LeadField::from_gains(Matrix::Identity(3, 2), {"a"}); }) == ErrorCode::kDimensionMismatch);
  }

  TEST_CASE("subset_leadfield picks columns in order and guards rank") {
    Matrix g(3, 3);
    g << 1, 0, 2, 0, 1, 0, 0, 0, 0;
    const LeadField lf = LeadField::from_gains(g);
    const Matrix h = subset_leadfield(lf, SourceSet({1, 0}));
    CHECK(h.col(0) == g.col(1));
    CHECK(h.col(1) == g.col(0));
    CHECK(error_of([&] { subset_leadfield(lf, SourceSet({0, 2})); }) == ErrorCode::kRankDeficientSubset);
    CHECK(error_of([&] { subset_leadfield(lf, SourceSet({5})); }) == ErrorCode::kInvalidArgument);
  }

  TEST_CASE("Covariance checks symmetry") {
    Matrix a = Matrix::Identity(3, 3);
    a(0, 2) = 1e-3;
    CHECK(error_of([&] { Covariance::make(a, CovarianceKind::kData); }) == ErrorCode::kNotSymmetric);
    const Covariance c = Covariance::make(Matrix::Identity(3, 3) * 2.0, CovarianceKind::kNoise);
    CHECK(c.dim() == 3);
    CHECK(c.smallest_eigenvalue() == doctest::Approx(2.0));
    CHECK(c.is_strictly_pd());
    CHECK_FALSE(Covariance::make(Matrix::Zero(2, 2), CovarianceKind::kData).is_strictly_pd());
  }

  TEST_CASE("sample_covariance matches a hand computation") {
    // One epoch, 2 channels, samples at t = 0, 1, 2, 3 (sfreq 1).
    Matrix x(2, 4);
    x << 1, 2, 3, 4, 2, 0, 2, 0;
    const Epochs ep = Epochs::make({x}, 1.0, 0.0);
    const Covariance c = sample_covariance(ep, 0.0, 3.0);
    // Means (2.5, 1); deviations (-1.5,-.5,.5,1.5) and (1,-1,1,-1).
    Matrix expected(2, 2);
    expected << 5.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, 4.0 / 3.0;
    CHECK(max_abs(c.matrix - expected) < 1e-14);
    CHECK(c.n_samples == 4);
    CHECK(c.kind == CovarianceKind::kData);

    // Windows are clipped to the recording; [2, 10] keeps samples 2 and 3.
    const Covariance tail = sample_covariance(ep, 2.0, 10.0, CovarianceKind::kNoise);
    CHECK(tail.n_samples == 2);
    CHECK(tail.matrix(0, 0) == doctest::Approx(0.5));
    CHECK(tail.matrix(1, 1) == doctest::Approx(2.0));
    CHECK(tail.matrix(0, 1) == doctest::Approx(-1.0));
  }

  TEST_CASE("sample_covariance pools samples across epochs") {
    Matrix a(1, 2), b(1, 2);
    a << 0, 1;
    b << 2, 3;
    const Covariance c = sample_covariance(Epochs::make({a, b}, 1.0, 0.0), 0.0, 1.0);
    // Pooled values 0,1,2,3: mean 1.5, unbiased variance 5/3.
    CHECK(c.matrix(0, 0) == doctest::Approx(5.0 / 3.0));
    CHECK(c.n_samples == 4);
  }

  TEST_CASE("sample_covariance window errors") {
    const Epochs ep = Epochs::make({Matrix::Ones(2, 5)}, 10.0, -0.2);
    CHECK(ep.time_of(2) == doctest::Approx(0.0));
    CHECK(error_of([&] { sample_covariance(ep, 1.0, 2.0); }) == ErrorCode::kEmptyWindow);
    CHECK(error_of([&] { sample_covariance(ep, 0.1, 0.0); }) == ErrorCode::kEmptyWindow);
    CHECK(error_of([&] { sample_covariance(ep, 0.0, 0.0); }) == ErrorCode::kTooFewSamples);
  }

  TEST_CASE("regularize adds scaled diagonal loading") {
    Matrix a(2, 2);
    a << 3, 1, 1, 1;
    const Covariance c = regularize(Covariance::make(a, CovarianceKind::kData), 0.5);
    // trace 4, m 2: loading 0.5 * 2 = 1.
    CHECK(c.matrix(0, 0) == doctest::Approx(4.0));
    CHECK(c.matrix(1, 1) == doctest::Approx(2.0));
    CHECK(c.matrix(0, 1) == doctest::Approx(1.0));
    CHECK(c.regularization.applied);
    CHECK(c.regularization.gamma == 0.5);
    CHECK(error_of([&] { regularize(c, -0.1); }) == ErrorCode::kNegativeGamma);
    const Covariance same = regularize(Covariance::make(a, CovarianceKind::kData), 0.0);
    CHECK(same.matrix == a);
  }

  TEST_CASE("synth_scenario builds R from its parts and is seed-deterministic") {
    const Scenario a = testing::scenario(16, 10, 3, 42);
    const Scenario b = testing::scenario(16, 10, 3, 42);
    CHECK(a.leadfield.gains == b.leadfield.gains);
    CHECK(a.true_sources == b.true_sources);
    CHECK(a.R.matrix == b.R.matrix);
    const Matrix h0 = a.H0();
    CHECK(max_abs(a.R.matrix - (h0 * a.Q0 * h0.transpose() + a.N.matrix)) < 1e-12);
    CHECK(a.l0() == 3);
    CHECK(a.Q0(0, 0) == doctest::Approx(9.0));
    CHECK(a.N.matrix.trace() == doctest::Approx(16.0));
    for (int j = 0; j < 10; ++j) CHECK(a.leadfield.gains.col(j).norm() == doctest::Approx(1.0));
    const Scenario c = testing::scenario(16, 10, 3, 43);
    CHECK(c.leadfield.gains != a.leadfield.gains);
  }

  TEST_CASE("synth_scenario separation guard and correlation") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Scenario sc = testing::scenario(8, 12, 2, seed, 35.0);
      for (int t : sc.true_sources.indices()) {
        for (int k = 0; k < 12; ++k) {
          if (k != t) CHECK(principal_angle_deg(sc.leadfield.gains.col(t), sc.leadfield.gains.col(k)) >= 35.0);
        }
      }
    }
    ScenarioParams p;
    p.l0 = 2;
    p.source_snr = {2.0, 1.0};
    p.correlation = 0.5;
    const Scenario sc = synth_scenario(p);
    CHECK(sc.Q0(0, 1) == doctest::Approx(1.0));
  }

  TEST_CASE("synth_scenario validation") {
    ScenarioParams p;
    p.m = 4;
    p.l0 = 5;
    p.source_snr.assign(5, 1.0);
    CHECK(error_of([&] { synth_scenario(p); }) == ErrorCode::kInfeasibleDimensions);
    p.l0 = 2;
    p.source_snr = {1.0, 2.0, 3.0};
    CHECK(error_of([&] { synth_scenario(p); }) == ErrorCode::kInvalidArgument);
    p.source_snr = {1.0, 2.0};
    p.correlation = 1.0;
    CHECK(error_of([&] { synth_scenario(p); }) == ErrorCode::kInvalidArgument);
  }

  TEST_CASE("simulate_epochs layout and second moments") {
    const Scenario sc = testing::scenario(6, 8, 2, 3);
    const Epochs ep = simulate_epochs(sc, 40, 250, 250, 500.0, 9);
    CHECK(ep.data.size() == 40);
    CHECK(ep.num_channels() == 6);
    CHECK(ep.num_times() == 500);
    CHECK(ep.t0 == doctest::Approx(-0.5));
    const Covariance n_hat = sample_covariance(ep, -0.5, -0.002, CovarianceKind::kNoise);
    const Covariance r_hat = sample_covariance(ep, 0.0, 0.498, CovarianceKind::kData);
    CHECK(n_hat.n_samples == 10000);
    CHECK(relative_frobenius_error(n_hat.matrix, sc.N.matrix) < 0.1);
    CHECK(relative_frobenius_error(r_hat.matrix, sc.R.matrix) < 0.1);
    const Epochs again = simulate_epochs(sc, 40, 250, 250, 500.0, 9);
    CHECK(again.data[7] == ep.data[7]);
  }

  TEST_CASE("coupled_covariances break the additive model") {
    const Scenario sc = testing::scenario(10, 8, 2, 5);
    const auto [r, n] = coupled_covariances(sc, 0.5, 1);
    const Matrix h0 = sc.H0();
    CHECK(max_abs(r.matrix - n.matrix - h0 * sc.Q0 * h0.transpose()) > 1e-3);
    const auto [r0, n0] = coupled_covariances(sc, 0.0, 1);
    CHECK(max_abs(r0.matrix - sc.R.matrix) < 1e-12);
    CHECK(max_abs(n0.matrix - sc.N.matrix) < 1e-12);
  }

  TEST_CASE("principal angle") {
    CHECK(principal_angle_deg(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 2)) == doctest::Approx(90.0));
    CHECK(principal_angle_deg(Eigen::Vector2d(1, 0), Eigen::Vector2d(-1, 0)) == doctest::Approx(0.0));
    CHECK(principal_angle_deg(Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 1)) == doctest::Approx(45.0));
  }
}
