#include "mvpure/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "mvpure/errors.hpp"

namespace mvpure {
namespace {

void check_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    std::ostringstream os;
    os << what << " needs a non-empty square matrix, got " << a.rows() << "x" << a.cols();
    fail(ErrorCode::kDimensionMismatch, os.str());
  }
}

void check_symmetric(const Matrix& a, double tol) {
  if (!a.allFinite()) fail(ErrorCode::kNotSymmetric, "matrix has non-finite entries");
  if (!is_symmetric(a, tol)) {
    std::ostringstream os;
    os << "asymmetry " << (a - a.transpose()).cwiseAbs().maxCoeff() << " exceeds " << tol
       << " * ||A||_F";
    fail(ErrorCode::kNotSymmetric, os.str());
  }
}

// Eigen returns ascending order; flip to descending and fix signs.
EigenPair descending_pair(const Vector& ascending_values, const Matrix& ascending_vectors) {
  const Eigen::Index n = ascending_values.size();
  EigenPair out{Vector(n), Matrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = ascending_values(n - 1 - i);
    out.vectors.col(i) = ascending_vectors.col(n - 1 - i);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    auto col = out.vectors.col(j);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(col(i)) > 1e-14) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
  }
  return out;
}

void check_gap(const Vector& values, int r, double eps_gap) {
  const int n = static_cast<int>(values.size());
  if (r < 1 || r > n) {
    std::ostringstream os;
    os << "rank " << r << " outside [1, " << n << "]";
    fail(ErrorCode::kRankOutOfRange, os.str());
  }
  if (r < n) {
    const double gap = values(r - 1) - values(r);
    const double scale = std::max(std::abs(values(0)), std::numeric_limits<double>::min());
    if (!(gap > eps_gap * scale)) {
      std::ostringstream os;
      os << "eigenvalue gap " << gap << " between positions " << r << " and " << r + 1
         << " is below " << eps_gap << " * |lambda_1|";
      fail(ErrorCode::kDegenerateGap, os.str());
    }
  }
}

}  // namespace

Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

bool is_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.norm();
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

EigenPair sym_eig(const Matrix& a, double symmetry_tol) {
  check_square(a, "sym_eig");
  check_symmetric(a, symmetry_tol);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(a), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kConvergenceFailure, "symmetric eigensolver did not converge");
  }
  return descending_pair(solver.eigenvalues(), solver.eigenvectors());
}

Vector sym_eigenvalues(const Matrix& a, double symmetry_tol) {
  check_square(a, "sym_eigenvalues");
  check_symmetric(a, symmetry_tol);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(a), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kConvergenceFailure, "symmetric eigensolver did not converge");
  }
  return solver.eigenvalues().reverse();
}

Matrix psd_power(const Matrix& a, MatrixPower power, double eps_psd) {
  const EigenPair eig = sym_eig(a);
  const double lmax = eig.values(0);
  const double lmin = eig.values(eig.values.size() - 1);
  Vector mapped(eig.values.size());
  if (power == MatrixPower::kSqrt) {
    if (lmin < -eps_psd * std::max(lmax, 0.0)) {
      std::ostringstream os;
      os << "square root needs a PSD matrix; smallest eigenvalue " << lmin;
      fail(ErrorCode::kNotPositiveDefinite, os.str());
    }
    for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = std::sqrt(std::max(eig.values(i), 0.0));
  } else {
    if (!(lmax > 0.0) || !(lmin > eps_psd * lmax)) {
      std::ostringstream os;
      os << "matrix is not positive definite; smallest eigenvalue " << lmin << " (largest " << lmax
         << ")";
      fail(ErrorCode::kNotPositiveDefinite, os.str());
    }
    for (Eigen::Index i = 0; i < mapped.size(); ++i) {
      mapped(i) = power == MatrixPower::kInverse ? 1.0 / eig.values(i) : 1.0 / std::sqrt(eig.values(i));
    }
  }
  Matrix out = eig.vectors * mapped.asDiagonal() * eig.vectors.transpose();
  return symmetrized(out);
}

Matrix pd_inverse(const Matrix& a, double eps_psd) {
  const EigenPair eig = sym_eig(a);
  const double lmax = eig.values(0);
  const double lmin = eig.values(eig.values.size() - 1);
  if (!(lmax > 0.0) || !(lmin > eps_psd * lmax)) {
    std::ostringstream os;
    os << "matrix is not positive definite; smallest eigenvalue " << lmin << " (largest " << lmax << ")";
    fail(ErrorCode::kNotPositiveDefinite, os.str());
  }
  if (lmax / lmin > tolerance::kConditionWarn) {
    std::ostringstream os;
    os << "inverting a matrix with condition number " << lmax / lmin;
    warn(os.str());
  }
  const Vector inv = eig.values.cwiseInverse();
  return symmetrized(eig.vectors * inv.asDiagonal() * eig.vectors.transpose());
}

Matrix top_r_orth_projector(const Matrix& a, int r, double eps_gap) {
  check_square(a, "top_r_orth_projector");
  const auto n = a.rows();
  if (r < 1 || r > n) {
    std::ostringstream os;
    os << "rank " << r << " outside [1, " << n << "]";
    fail(ErrorCode::kRankOutOfRange, os.str());
  }
  if (r == n) {
    check_symmetric(a, tolerance::kSymmetry);
    return Matrix::Identity(n, n);
  }
  const EigenPair eig = sym_eig(a);
  check_gap(eig.values, r, eps_gap);
  const auto basis = eig.vectors.leftCols(r);
  return symmetrized(basis * basis.transpose());
}

Matrix top_r_oblique_projector(const Matrix& m, const Matrix& similarity, int r, double eps_gap) {
  check_square(m, "top_r_oblique_projector");
  check_square(similarity, "top_r_oblique_projector similarity factor");
  if (m.rows() != similarity.rows()) {
    fail(ErrorCode::kDimensionMismatch, "oblique projector: factor and matrix sizes differ");
  }
  const auto n = m.rows();
  if (r < 1 || r > n) {
    std::ostringstream os;
    os << "rank " << r << " outside [1, " << n << "]";
    fail(ErrorCode::kRankOutOfRange, os.str());
  }
  Matrix factor_inv;
  try {
    factor_inv = psd_power(similarity, MatrixPower::kInverse);
  } catch (const Error& e) {
    fail(ErrorCode::kNotSimilarizable, std::string("similarity factor is not SPD: ") + e.what());
  }
  const Matrix sym = similarity * m * factor_inv;
  if (!is_symmetric(sym, 1e-8)) {
    fail(ErrorCode::kNotSimilarizable, "F M F^{-1} is not symmetric for the supplied factor");
  }
  const EigenPair eig = sym_eig(sym, 1e-8);
  if (!(eig.values(n - 1) > 0.0)) {
    std::ostringstream os;
    os << "oblique projector needs a positive spectrum; smallest eigenvalue " << eig.values(n - 1);
    fail(ErrorCode::kNotSimilarizable, os.str());
  }
  if (r == n) return Matrix::Identity(n, n);
  check_gap(eig.values, r, eps_gap);
  const auto basis = eig.vectors.leftCols(r);
  return factor_inv * (basis * basis.transpose()) * similarity;
}

int numerical_rank(const Matrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

double relative_frobenius_error(const Matrix& a, const Matrix& b) {
  const double denom = b.norm();
  const double diff = (a - b).norm();
  return denom > 0.0 ? diff / denom : diff;
}

}  // namespace mvpure
