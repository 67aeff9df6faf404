#include "helpers.hpp"
#include "mvpure/beamformer.hpp"

using namespace mvpure;
using testing::error_of;
using testing::max_abs;

TEST_SUITE("beamformer") {
  TEST_CASE("identity lead field gives the identity filter") {
    std::mt19937_64 rng(1);
    const Covariance c = Covariance::make(testing::random_spd(rng, 4), CovarianceKind::kData);
    const SpatialFilter w = make_lcmv(Matrix::Identity(4, 4), c, Flavor::kR);
    CHECK(max_abs(w.weights - Matrix::Identity(4, 4)) < 1e-12);
    CHECK(w.rank == 4);
    CHECK(w.source_set.indices() == std::vector<int>{0, 1, 2, 3});
  }

  TEST_CASE("two-channel hand computation") {
    const Matrix h = Eigen::Vector2d(1, 0);
    const Covariance c = Covariance::make(Matrix::Identity(2, 2), CovarianceKind::kNoise);
    const SpatialFilter w = make_lcmv(h, c, Flavor::kN);
    CHECK(w.weights(0, 0) == doctest::Approx(1.0));
    CHECK(w.weights(0, 1) == doctest::Approx(0.0));
    CHECK(w.kind == FilterKind::kLcmvN);
    CHECK(w.gain_check < 1e-15);
  }

  TEST_CASE("R and N flavors agree on exact scenarios and keep unit gain") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Scenario sc = testing::scenario(12, 8, 1 + static_cast<int>(seed % 3), seed);
      const Matrix h0 = sc.H0();
      const SpatialFilter wr = make_lcmv(h0, sc.R, Flavor::kR, sc.true_sources);
      const SpatialFilter wn = make_lcmv(h0, sc.N, Flavor::kN, sc.true_sources);
      CHECK(max_abs(wr.weights - wn.weights) < 1e-7);
      CHECK(max_abs(wr.weights * h0 - Matrix::Identity(sc.l0(), sc.l0())) < 1e-7);
      CHECK(wr.gain_check < 1e-7);
      CHECK(numerical_rank(wr.weights) == sc.l0());
    }
  }

  TEST_CASE("flavors diverge when sources leak into the noise") {
    const Scenario sc = testing::scenario(12, 8, 2, 9);
    const auto [r, n] = coupled_covariances(sc, 0.5, 2);
    const Matrix h0 = sc.H0();
    CHECK(max_abs(make_lcmv(h0, r, Flavor::kR).weights - make_lcmv(h0, n, Flavor::kN).weights) > 1e-3);
  }

  TEST_CASE("full-rank reduced filter equals LCMV") {
    const Scenario sc = testing::scenario(10, 6, 3, 4);
    const Matrix h0 = sc.H0();
    CHECK(max_abs(make_mvp(h0, sc.R, sc.N, 3, Flavor::kR).weights - make_lcmv(h0, sc.R, Flavor::kR).weights) <
          1e-10);
    CHECK(max_abs(make_mvp(h0, sc.R, sc.N, 3, Flavor::kN).weights - make_lcmv(h0, sc.N, Flavor::kN).weights) <
          1e-10);
    const Scenario one = testing::scenario(10, 6, 1, 4);
    CHECK(max_abs(make_mvp(one.H0(), one.R, one.N, 1, Flavor::kR).weights -
                  make_lcmv(one.H0(), one.R, Flavor::kR).weights) < 1e-10);
  }

  TEST_CASE("reduced filter gain equals an independently built projector") {
    const Scenario sc = testing::scenario(12, 8, 3, 6);
    const Matrix h0 = sc.H0();
    const Matrix s0 = h0.transpose() * sc.R.matrix.inverse() * h0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (s0 + s0.transpose()));
    // Eigen sorts ascending: the two largest are the last two columns.
    const Matrix u = es.eigenvectors().rightCols(2);
    const Matrix p = u * u.transpose();
    const SpatialFilter w = make_mvp(h0, sc.R, sc.N, 2, Flavor::kR, sc.true_sources);
    CHECK(max_abs(w.weights * h0 - p) < 1e-7);
    CHECK(w.gain_check < 1e-7);
    CHECK(w.rank == 2);
    CHECK(numerical_rank(w.weights) == 2);
  }

  TEST_CASE("apply_filter is a plain product") {
    std::mt19937_64 rng(3);
    const Matrix data = testing::gaussian(rng, 5, 7);
    SpatialFilter ident;
    ident.weights = Matrix::Identity(5, 5);
    CHECK(apply_filter(ident, data) == data);
    SpatialFilter w;
    w.weights = testing::gaussian(rng, 2, 5);
    CHECK(max_abs(apply_filter(w, Matrix::Zero(5, 7))) == 0.0);
    const Matrix out = apply_filter(w, data);
    for (int i = 0; i < 2; ++i) {
      for (int t = 0; t < 7; ++t) {
        double acc = 0.0;
        for (int c = 0; c < 5; ++c) acc += w.weights(i, c) * data(c, t);
        CHECK(std::abs(out(i, t) - acc) < 1e-12);
      }
    }
    const Epochs ep = Epochs::make({data, 2.0 * data}, 100.0, 0.0);
    const auto per_epoch = apply_filter(w, ep);
    REQUIRE(per_epoch.size() == 2);
    CHECK(max_abs(per_epoch[1] - 2.0 * out) < 1e-12);
    CHECK(error_of([&] { apply_filter(w, Matrix::Zero(4, 3)); }) == ErrorCode::kDimensionMismatch);
  }

  TEST_CASE("filter_mse zero filter and source-set guard") {
    const Scenario sc = testing::scenario(10, 6, 2, 8);
    SpatialFilter zero;
    zero.weights = Matrix::Zero(2, 10);
    zero.source_set = sc.true_sources;
    CHECK(filter_mse(zero, sc, MseForm::kRaw) == doctest::Approx(sc.Q0.trace()));
    CHECK(filter_mse(zero, sc, MseForm::kWhitened) == doctest::Approx(2.0));
    const SpatialFilter w = make_lcmv(sc.H0(), sc.R, Flavor::kR, sc.true_sources);
    // Unit-gain filters pay only the noise term tr(W N W^t).
    CHECK(filter_mse(w, sc) == doctest::Approx((w.weights * sc.N.matrix * w.weights.transpose()).trace()));
    CHECK(filter_mse(w, sc) >= -1e-9);
    SpatialFilter other = w;
    other.source_set = SourceSet({sc.true_sources[1], sc.true_sources[0]});
    CHECK(error_of([&] { filter_mse(other, sc); }) == ErrorCode::kSourceSetMismatch);
  }

  TEST_CASE("whitened MSE of the reduced R filter follows the eigenvalue expression") {
    const Scenario sc = testing::scenario(14, 10, 3, 12, 0.0, NoiseKind::kSeededSpd, {2.0, 1.0, 0.5});
    const Matrix ht = whitened_gain(sc);
    const Vector g = sym_eigenvalues(symmetrized(ht.transpose() * sc.N.matrix.inverse() * ht));
    double inv = 0.0;
    for (int r = 1; r <= 3; ++r) {
      inv += 1.0 / g(r - 1);
      const double trace_form =
          filter_mse(make_mvp(ht, sc.R, sc.N, r, Flavor::kR, sc.true_sources), sc, MseForm::kWhitened);
      CHECK(trace_form == doctest::Approx(inv - r + 3).epsilon(1e-9));
    }
  }

  TEST_CASE("construction errors") {
    const Scenario sc = testing::scenario(8, 6, 2, 1);
    const Matrix h0 = sc.H0();
    CHECK(error_of([&] { make_lcmv(h0, sc.N, Flavor::kR); }) == ErrorCode::kInvalidArgument);
    CHECK(error_of([&] { make_mvp(h0, sc.R, sc.N, 0, Flavor::kR); }) == ErrorCode::kRankOutOfRange);
    CHECK(error_of([&] { make_mvp(h0, sc.R, sc.N, 3, Flavor::kN); }) == ErrorCode::kRankOutOfRange);
    Matrix dup(8, 2);
    dup.col(0) = h0.col(0);
    dup.col(1) = h0.col(0);
    CHECK(error_of([&] { make_lcmv(dup, sc.R, Flavor::kR); }) == ErrorCode::kRankDeficientSubset);
    const Covariance singular = Covariance::make(Matrix::Zero(8, 8), CovarianceKind::kData);
    CHECK(error_of([&] { make_lcmv(h0, singular, Flavor::kR); }) == ErrorCode::kNotPositiveDefinite);
    CHECK(parse_filter_kind("mvp_n") == FilterKind::kMvpN);
    CHECK(filter_kind_name(FilterKind::kLcmvR) == "lcmv-r");
    CHECK(error_of([] { parse_filter_kind("music"); }) == ErrorCode::kInvalidArgument);
    CHECK(make_filter(h0, sc.R, sc.N, FilterKind::kLcmvN, 1).rank == 2);
  }
}
