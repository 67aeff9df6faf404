#pragma once

#include <Eigen/Dense>

namespace mvpure {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Eigendecomposition of a symmetric matrix. Values are sorted
/// non-increasing; column i of `vectors` pairs with values[i]. Each
/// eigenvector is signed so that its first nonzero component is positive.
struct EigenPair {
  Vector values;
  Matrix vectors;
};

namespace tolerance {
inline constexpr double kSymmetry = 1e-8;      // relative to ||A||_F
inline constexpr double kPsd = 1e-10;          // relative to lambda_max
inline constexpr double kGap = 1e-12;          // relative to |lambda_1|
inline constexpr double kConditionWarn = 1e10;
}  // namespace tolerance

EigenPair sym_eig(const Matrix& a, double symmetry_tol = tolerance::kSymmetry);

/// Eigenvalues only, descending. Same symmetry check as sym_eig.
Vector sym_eigenvalues(const Matrix& a, double symmetry_tol = tolerance::kSymmetry);

enum class MatrixPower { kSqrt, kInvSqrt, kInverse };

/// V diag(values^p) V^t for a symmetric PSD argument. Negative powers need
/// every eigenvalue above eps_psd * lambda_max.
Matrix psd_power(const Matrix& a, MatrixPower power, double eps_psd = tolerance::kPsd);

/// PD-checked inverse; warns when the condition number exceeds 1e10.
Matrix pd_inverse(const Matrix& a, double eps_psd = tolerance::kPsd);

/// Orthogonal projector onto the span of the eigenvectors of the r largest
/// eigenvalues of a symmetric matrix. r == n returns the exact identity.
Matrix top_r_orth_projector(const Matrix& a, int r, double eps_gap = tolerance::kGap);

/// Oblique projector U I_r U^{-1} onto the principal r-dimensional subspace of
/// a matrix M with real positive spectrum. `similarity` is an SPD factor F for
/// which F M F^{-1} is symmetric; the projector is F^{-1} P_orth(F M F^{-1}) F.
Matrix top_r_oblique_projector(const Matrix& m, const Matrix& similarity, int r,
                               double eps_gap = tolerance::kGap);

/// 0.5 (A + A^t).
Matrix symmetrized(const Matrix& a);

/// max |A - A^t| <= tol * ||A||_F.
bool is_symmetric(const Matrix& a, double tol = tolerance::kSymmetry);

/// Number of singular values above rel_tol * sigma_max.
int numerical_rank(const Matrix& a, double rel_tol = 1e-9);

/// ||A - B||_F / ||B||_F (absolute when B is zero).
double relative_frobenius_error(const Matrix& a, const Matrix& b);

}  // namespace mvpure
