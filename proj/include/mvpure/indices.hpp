#pragma once

#include <string>
#include <string_view>

#include "mvpure/model.hpp"

namespace mvpure {

/// Whitened lead-field products shared by every candidate evaluation:
/// N^{-1} L, R^{-1} L and N R^{-1} L, each m x s. Read-only after
/// construction, so one instance can serve concurrent kernel builds.
class IndexContext {
 public:
  IndexContext(const LeadField& leadfield, const Covariance& R, const Covariance& N);

  const LeadField& leadfield() const { return leadfield_; }
  const Matrix& n_inv_gains() const { return n_inv_gains_; }
  const Matrix& r_inv_gains() const { return r_inv_gains_; }
  const Matrix& n_r_inv_gains() const { return n_r_inv_gains_; }

 private:
  LeadField leadfield_;
  Matrix n_inv_gains_;
  Matrix r_inv_gains_;
  Matrix n_r_inv_gains_;
};

/// Building blocks of the activity indices for one candidate set theta:
///   G = H^t N^{-1} H,  S = H^t R^{-1} H,  T = H^t R^{-1} N R^{-1} H,
///   Q = S^{-1} - G^{-1}  (must be positive definite).
struct IndexKernel {
  Matrix G, S, T, Q;
  SourceSet source_set;

  Matrix S_inv, G_inv, T_inv;
  Matrix S_inv_sqrt, T_inv_sqrt;
  Matrix Q_sqrt, Q_inv_sqrt;

  int size() const { return static_cast<int>(G.rows()); }
};

/// Q must clear this fraction of the largest eigenvalue of S^{-1}.
inline constexpr double kQPositiveTol = 1e-10;

IndexKernel build_kernel(const IndexContext& context, const SourceSet& theta);
IndexKernel build_kernel(const LeadField& leadfield, const SourceSet& theta, const Covariance& R,
                         const Covariance& N);

/// Kernel straight from l x l blocks (no lead field). Used by tests that draw
/// random kernels; runs the same invariant checks.
IndexKernel kernel_from_blocks(const Matrix& G, const Matrix& S, const Matrix& T, SourceSet theta = {});

/// Q^{1/2} X Q^{1/2} for X in {G, S, T}.
struct TildeMatrices {
  Matrix G, S, T;
};
TildeMatrices tilde_matrices(const IndexKernel& k);

enum class IndexKind { kMai, kMpz, kMaiMvp, kMpzMvp };

/// kFast evaluates the closed algebraic forms; kDefinitional goes through
/// the Q^{1/2}-transformed matrices and an orthogonal projector. Both must
/// agree; the definitional path exists for cross-checking.
enum class EvalPath { kFast, kDefinitional };

std::string_view index_kind_name(IndexKind kind);
/// Accepts "mai", "mpz", "mai-mvp", "mpz-mvp" (underscores allowed).
IndexKind parse_index_kind(std::string_view name);
bool is_reduced_rank(IndexKind kind);

/// tr(G S^{-1}) - l
double mai(const IndexKernel& k);
/// tr(S T^{-1}) - l
double mpz(const IndexKernel& k);
/// Sum of the r largest eigenvalues of G S^{-1} minus r, 1 <= r <= l.
double mai_ext(const IndexKernel& k, int r);
/// Sum of the r largest eigenvalues of S T^{-1} minus r, 1 <= r <= l.
double mpz_ext(const IndexKernel& k, int r);

/// Reduced-rank MAI. Equals mai(k) when l <= r; otherwise the sum of the r
/// largest eigenvalues of G S^{-1} minus r.
double mai_mvp(const IndexKernel& k, int r, EvalPath path = EvalPath::kFast);

/// Reduced-rank MPZ. Equals mpz(k) when l <= r; otherwise
/// tr(S T^{-1} P) - r with P the oblique projector onto the principal
/// r-dimensional subspace of S Q.
double mpz_mvp(const IndexKernel& k, int r, EvalPath path = EvalPath::kFast);

double evaluate_index(const IndexKernel& k, IndexKind kind, int r, EvalPath path = EvalPath::kFast);

}  // namespace mvpure
