#include <cstring>

#include "helpers.hpp"
#include "mvpure/numerics.hpp"

using namespace mvpure;
using testing::error_of;
using testing::max_abs;

TEST_SUITE("numerics") {
  TEST_CASE("sym_eig of the identity gives unit eigenvalues") {
    const EigenPair e = sym_eig(Matrix::Identity(3, 3));
    CHECK(max_abs(e.values - Vector::Ones(3)) == 0.0);
    CHECK(max_abs(e.vectors.transpose() * e.vectors - Matrix::Identity(3, 3)) < 1e-10);
  }

  TEST_CASE("sym_eig of a diagonal matrix sorts and permutes") {
    const Matrix a = Vector(Eigen::Vector3d(3, 1, 2)).asDiagonal();
    const EigenPair e = sym_eig(a);
    CHECK(e.values(0) == doctest::Approx(3));
    CHECK(e.values(1) == doctest::Approx(2));
    CHECK(e.values(2) == doctest::Approx(1));
    Matrix expected = Matrix::Zero(3, 3);
    expected(0, 0) = 1;
    expected(2, 1) = 1;
    expected(1, 2) = 1;
    CHECK(max_abs(e.vectors - expected) < 1e-12);
  }

  TEST_CASE("sym_eig reconstructs seeded symmetric matrices") {
    std::mt19937_64 rng(11);
    for (int n : {1, 2, 6, 17, 32}) {
      const Matrix a = testing::random_symmetric(rng, n);
      const EigenPair e = sym_eig(a);
      CHECK(relative_frobenius_error(e.vectors * e.values.asDiagonal() * e.vectors.transpose(), a) < 1e-9);
      CHECK(max_abs(e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)) < 1e-10);
      for (int i = 1; i < n; ++i) CHECK(e.values(i - 1) >= e.values(i));
      for (int j = 0; j < n; ++j) {
        int k = 0;
        while (std::abs(e.vectors(k, j)) <= 1e-14) ++k;
        CHECK(e.vectors(k, j) > 0.0);
      }
    }
  }

  TEST_CASE("sym_eig is bitwise repeatable") {
    std::mt19937_64 rng(12);
    const Matrix a = testing::random_symmetric(rng, 9);
    const EigenPair x = sym_eig(a);
    const EigenPair y = sym_eig(a);
    CHECK(std::memcmp(x.values.data(), y.values.data(), sizeof(double) * 9) == 0);
    CHECK(std::memcmp(x.vectors.data(), y.vectors.data(), sizeof(double) * 81) == 0);
  }

  TEST_CASE("sym_eig rejects asymmetric and empty input") {
    Matrix a = Matrix::Identity(3, 3);
    a(0, 1) = 0.5;
    CHECK(error_of([&] { sym_eig(a); }) == ErrorCode::kNotSymmetric);
    CHECK(error_of([&] { sym_eig(Matrix(2, 3)); }) == ErrorCode::kDimensionMismatch);
    CHECK(error_of([&] { sym_eig(Matrix(0, 0)); }) == ErrorCode::kDimensionMismatch);
  }

  TEST_CASE("psd_power closed forms") {
    CHECK(max_abs(psd_power(Matrix::Identity(4, 4), MatrixPower::kInvSqrt) - Matrix::Identity(4, 4)) < 1e-14);
    const Matrix d = Eigen::Vector2d(4, 9).asDiagonal();
    const Matrix expected = Eigen::Vector2d(2, 3).asDiagonal();
    CHECK(max_abs(psd_power(d, MatrixPower::kSqrt) - expected) < 1e-14);
    const Matrix inv = Eigen::Vector2d(0.25, 1.0 / 9.0).asDiagonal();
    CHECK(max_abs(psd_power(d, MatrixPower::kInverse) - inv) < 1e-15);
  }

  TEST_CASE("psd_power identities on seeded SPD matrices") {
    std::mt19937_64 rng(13);
    for (int n = 1; n <= 32; n += 3) {
      const Matrix a = testing::random_spd(rng, n);
      const Matrix half = psd_power(a, MatrixPower::kSqrt);
      const Matrix inv_half = psd_power(a, MatrixPower::kInvSqrt);
      CHECK(relative_frobenius_error(half * half, a) < 1e-9);
      CHECK(max_abs(inv_half * a * inv_half - Matrix::Identity(n, n)) < 1e-8);
      CHECK(max_abs(a * psd_power(a, MatrixPower::kInverse) - Matrix::Identity(n, n)) < 1e-8);
      CHECK(max_abs(half - half.transpose()) == 0.0);
    }
  }

  TEST_CASE("psd_power rejects singular input for negative powers") {
    const Matrix a = Eigen::Vector3d(1, 1, 0).asDiagonal();
    CHECK(error_of([&] { psd_power(a, MatrixPower::kInvSqrt); }) == ErrorCode::kNotPositiveDefinite);
    CHECK(error_of([&] { pd_inverse(a); }) == ErrorCode::kNotPositiveDefinite);
    CHECK(max_abs(psd_power(a, MatrixPower::kSqrt) - a) < 1e-15);
    const Matrix neg = Eigen::Vector2d(1, -1).asDiagonal();
    CHECK(error_of([&] { psd_power(neg, MatrixPower::kSqrt); }) == ErrorCode::kNotPositiveDefinite);
  }

  TEST_CASE("pd_inverse warns on ill-conditioned input") {
    std::string seen;
    set_warning_sink([&](std::string_view m) { seen = std::string(m); });
    const Matrix a = Eigen::Vector2d(1.0, 1e-11).asDiagonal();
    pd_inverse(a, 1e-14);
    set_warning_sink(nullptr);
    CHECK(seen.find("condition") != std::string::npos);
  }

  TEST_CASE("orthogonal projector closed forms") {
    const Matrix a = Eigen::Vector3d(5, 3, 1).asDiagonal();
    const Matrix expected = Eigen::Vector3d(1, 1, 0).asDiagonal();
    CHECK(max_abs(top_r_orth_projector(a, 2) - expected) < 1e-14);
    std::mt19937_64 rng(14);
    const Matrix spd = testing::random_spd(rng, 5);
    CHECK(top_r_orth_projector(spd, 5) == Matrix::Identity(5, 5));
  }

  TEST_CASE("orthogonal projector axioms on seeded SPD matrices") {
    std::mt19937_64 rng(15);
    for (int n = 2; n <= 32; n += 5) {
      const Matrix a = testing::random_spd(rng, n);
      for (int r = 1; r <= n; r += std::max(1, n / 3)) {
        const Matrix p = top_r_orth_projector(a, r);
        CHECK(max_abs(p - p.transpose()) < 1e-12);
        CHECK(max_abs(p * p - p) < 1e-9);
        CHECK(p.trace() == doctest::Approx(r).epsilon(1e-9));
        CHECK(max_abs(p * a - a * p) < 1e-8);
      }
    }
  }

  TEST_CASE("orthogonal projector errors") {
    const Matrix a = Eigen::Vector3d(2, 1, 1).asDiagonal();
    CHECK(error_of([&] { top_r_orth_projector(a, 0); }) == ErrorCode::kRankOutOfRange);
    CHECK(error_of([&] { top_r_orth_projector(a, 4); }) == ErrorCode::kRankOutOfRange);
    CHECK(error_of([&] { top_r_orth_projector(a, 2); }) == ErrorCode::kDegenerateGap);
    CHECK(max_abs(top_r_orth_projector(a, 1) - Matrix(Eigen::Vector3d(1, 0, 0).asDiagonal())) < 1e-14);
  }

  TEST_CASE("oblique projector reduces to the orthogonal one for symmetric input") {
    std::mt19937_64 rng(16);
    const Matrix m = testing::random_spd(rng, 6);
    for (int r = 1; r <= 6; ++r) {
      CHECK(max_abs(top_r_oblique_projector(m, Matrix::Identity(6, 6), r) - top_r_orth_projector(m, r)) < 1e-9);
    }
  }

  TEST_CASE("oblique projector on a diagonal matrix") {
    const Matrix m = Eigen::Vector3d(0.9, 0.5, 0.1).asDiagonal();
    const Matrix expected = Eigen::Vector3d(1, 0, 0).asDiagonal();
    CHECK(max_abs(top_r_oblique_projector(m, Matrix::Identity(3, 3), 1) - expected) < 1e-14);
  }

  TEST_CASE("oblique projector from known similarity factors") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 3 + trial % 5;
      const Matrix q = testing::random_spd(rng, n);
      const Matrix q_half = psd_power(q, MatrixPower::kSqrt);
      const Matrix q_inv_half = psd_power(q, MatrixPower::kInvSqrt);
      Vector d(n);
      for (int i = 0; i < n; ++i) d(i) = 0.9 - 0.8 * i / n;
      const Matrix m = q_inv_half * d.asDiagonal() * q_half;
      for (int r = 1; r <= n; ++r) {
        Vector pattern = Vector::Zero(n);
        pattern.head(r).setOnes();
        const Matrix expected = q_inv_half * pattern.asDiagonal() * q_half;
        const Matrix p = top_r_oblique_projector(m, q_half, r);
        CHECK(max_abs(p - expected) < 1e-8);
        CHECK(max_abs(p * p - p) < 1e-8);
        CHECK(max_abs(p * m - m * p) < 1e-8);
      }
    }
  }

  TEST_CASE("oblique projector rejects a non-PD similarity factor") {
    const Matrix m = Eigen::Vector2d(0.9, 0.1).asDiagonal();
    const Matrix f = Eigen::Vector2d(1.0, -1.0).asDiagonal();
    CHECK(error_of([&] { top_r_oblique_projector(m, f, 1); }) == ErrorCode::kNotSimilarizable);
  }

  TEST_CASE("helpers") {
    Matrix a(2, 2);
    a << 1, 2, 0, 1;
    CHECK(max_abs(symmetrized(a) - Matrix(Eigen::Matrix2d{{1, 1}, {1, 1}})) == 0.0);
    CHECK_FALSE(is_symmetric(a));
    CHECK(is_symmetric(symmetrized(a)));
    CHECK(numerical_rank(Eigen::Vector3d(1, 1e-12, 0).asDiagonal()) == 1);
    CHECK(relative_frobenius_error(Matrix::Zero(2, 2), Matrix::Zero(2, 2)) == 0.0);
  }
}
