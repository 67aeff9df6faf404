#include "mvpure/indices.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "mvpure/errors.hpp"

namespace mvpure {
namespace {

double trace_of_product(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

double top_sum(const Vector& descending, int r) {
  double s = 0.0;
  for (int i = 0; i < r; ++i) s += descending(i);
  return s;
}

void check_rank(int r, int lo, int hi) {
  if (r < lo || r > hi) {
    std::ostringstream os;
    os << "rank " << r << " outside [" << lo << ", " << hi << "]";
    fail(ErrorCode::kRankOutOfRange, os.str());
  }
}

IndexKernel finish_kernel(Matrix g, Matrix s, Matrix t, SourceSet theta) {
  IndexKernel k;
  k.G = symmetrized(g);
  k.S = symmetrized(s);
  k.T = symmetrized(t);
  k.source_set = std::move(theta);

  k.G_inv = pd_inverse(k.G);
  k.S_inv = pd_inverse(k.S);
  k.T_inv = pd_inverse(k.T);

  const Vector diff = sym_eigenvalues(symmetrized(k.G - k.S));
  if (diff(diff.size() - 1) < -1e-9 * k.G.norm()) {
    std::ostringstream os;
    os << "G - S is not positive semidefinite (smallest eigenvalue " << diff(diff.size() - 1) << ")";
    fail(ErrorCode::kQNotPositiveDefinite, os.str());
  }

  k.Q = symmetrized(k.S_inv - k.G_inv);
  const Vector q_values = sym_eigenvalues(k.Q);
  const double s_inv_max = sym_eigenvalues(k.S_inv)(0);
  const double q_min = q_values(q_values.size() - 1);
  if (!(q_min > kQPositiveTol * s_inv_max)) {
    std::ostringstream os;
    os << "Q = S^-1 - G^-1 is not positive definite (smallest eigenvalue " << q_min << ")";
    fail(ErrorCode::kQNotPositiveDefinite, os.str());
  }
  k.Q_sqrt = psd_power(k.Q, MatrixPower::kSqrt);
  k.Q_inv_sqrt = psd_power(k.Q, MatrixPower::kInvSqrt);
  k.S_inv_sqrt = psd_power(k.S, MatrixPower::kInvSqrt);
  k.T_inv_sqrt = psd_power(k.T, MatrixPower::kInvSqrt);
  return k;
}

}  // namespace

IndexContext::IndexContext(const LeadField& leadfield, const Covariance& R, const Covariance& N)
    : leadfield_(leadfield) {
  const int m = leadfield.num_channels();
  if (R.dim() != m || N.dim() != m) {
    std::ostringstream os;
    os << "lead field has " << m << " channels but covariances are " << R.dim() << "x" << R.dim()
       << " and " << N.dim() << "x" << N.dim();
    fail(ErrorCode::kDimensionMismatch, os.str());
  }
  const Matrix n_inv = pd_inverse(N.matrix);
  const Matrix r_inv = pd_inverse(R.matrix);
  n_inv_gains_ = n_inv * leadfield.gains;
  r_inv_gains_ = r_inv * leadfield.gains;
  n_r_inv_gains_ = N.matrix * r_inv_gains_;
}

IndexKernel build_kernel(const IndexContext& context, const SourceSet& theta) {
  const Matrix h = subset_leadfield(context.leadfield(), theta);
  const Matrix n_inv_h = subset_columns(context.n_inv_gains(), theta);
  const Matrix r_inv_h = subset_columns(context.r_inv_gains(), theta);
  const Matrix n_r_inv_h = subset_columns(context.n_r_inv_gains(), theta);
  return finish_kernel(h.transpose() * n_inv_h, h.transpose() * r_inv_h, r_inv_h.transpose() * n_r_inv_h,
                       theta);
}

IndexKernel build_kernel(const LeadField& leadfield, const SourceSet& theta, const Covariance& R,
                         const Covariance& N) {
  return build_kernel(IndexContext(leadfield, R, N), theta);
}

IndexKernel kernel_from_blocks(const Matrix& G, const Matrix& S, const Matrix& T, SourceSet theta) {
  if (G.rows() != G.cols() || S.rows() != G.rows() || S.cols() != G.rows() || T.rows() != G.rows() ||
      T.cols() != G.rows() || G.rows() < 1) {
    fail(ErrorCode::kDimensionMismatch, "kernel blocks must be square and of equal size");
  }
  return finish_kernel(G, S, T, std::move(theta));
}

TildeMatrices tilde_matrices(const IndexKernel& k) {
  return {symmetrized(k.Q_sqrt * k.G * k.Q_sqrt), symmetrized(k.Q_sqrt * k.S * k.Q_sqrt),
          symmetrized(k.Q_sqrt * k.T * k.Q_sqrt)};
}

std::string_view index_kind_name(IndexKind kind) {
  switch (kind) {
    case IndexKind::kMai: return "mai";
    case IndexKind::kMpz: return "mpz";
    case IndexKind::kMaiMvp: return "mai-mvp";
    case IndexKind::kMpzMvp: return "mpz-mvp";
  }
  return "unknown";
}

IndexKind parse_index_kind(std::string_view name) {
  std::string norm(name);
  for (auto& c : norm) c = c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (norm == "mai") return IndexKind::kMai;
  if (norm == "mpz") return IndexKind::kMpz;
  if (norm == "mai-mvp") return IndexKind::kMaiMvp;
  if (norm == "mpz-mvp") return IndexKind::kMpzMvp;
  fail(ErrorCode::kInvalidArgument, "unknown index kind '" + std::string(name) + "'");
}

bool is_reduced_rank(IndexKind kind) { return kind == IndexKind::kMaiMvp || kind == IndexKind::kMpzMvp; }

double mai(const IndexKernel& k) { return trace_of_product(k.G, k.S_inv) - k.size(); }

double mpz(const IndexKernel& k) { return trace_of_product(k.S, k.T_inv) - k.size(); }

double mai_ext(const IndexKernel& k, int r) {
  check_rank(r, 1, k.size());
  return top_sum(sym_eigenvalues(symmetrized(k.S_inv_sqrt * k.G * k.S_inv_sqrt)), r) - r;
}

double mpz_ext(const IndexKernel& k, int r) {
  check_rank(r, 1, k.size());
  return top_sum(sym_eigenvalues(symmetrized(k.T_inv_sqrt * k.S * k.T_inv_sqrt)), r) - r;
}

double mai_mvp(const IndexKernel& k, int r, EvalPath path) {
  if (r < 1) fail(ErrorCode::kRankOutOfRange, "rank must be >= 1, got " + std::to_string(r));
  const int l = k.size();
  if (l <= r) return mai(k);
  if (path == EvalPath::kFast) {
    return top_sum(sym_eigenvalues(symmetrized(k.S_inv_sqrt * k.G * k.S_inv_sqrt)), r) - r;
  }
  const TildeMatrices t = tilde_matrices(k);
  const Matrix p = top_r_orth_projector(t.S, r);
  return trace_of_product(t.G * pd_inverse(t.S), p) - r;
}

double mpz_mvp(const IndexKernel& k, int r, EvalPath path) {
  if (r < 1) fail(ErrorCode::kRankOutOfRange, "rank must be >= 1, got " + std::to_string(r));
  const int l = k.size();
  if (l <= r) return mpz(k);
  if (path == EvalPath::kFast) {
    // S Q = Q^{-1/2} (Q^{1/2} S Q^{1/2}) Q^{1/2}; its spectrum lies in (0, 1).
    const Vector sq_spectrum = sym_eigenvalues(symmetrized(k.Q_sqrt * k.S * k.Q_sqrt));
    if (!(sq_spectrum(l - 1) > 0.0) || sq_spectrum(0) >= 1.0 + 1e-9) {
      std::ostringstream os;
      os << "spectrum of S Q leaves (0, 1): [" << sq_spectrum(l - 1) << ", " << sq_spectrum(0) << "]";
      fail(ErrorCode::kNotSimilarizable, os.str());
    }
    const Matrix p = top_r_oblique_projector(k.S * k.Q, k.Q_sqrt, r);
    return trace_of_product(k.S * k.T_inv, p) - r;
  }
  const TildeMatrices t = tilde_matrices(k);
  const Matrix p = top_r_orth_projector(t.S, r);
  return trace_of_product(t.S * pd_inverse(t.T), p) - r;
}

double evaluate_index(const IndexKernel& k, IndexKind kind, int r, EvalPath path) {
  switch (kind) {
    case IndexKind::kMai: return mai(k);
    case IndexKind::kMpz: return mpz(k);
    case IndexKind::kMaiMvp: return mai_mvp(k, r, path);
    case IndexKind::kMpzMvp: return mpz_mvp(k, r, path);
  }
  fail(ErrorCode::kInvalidArgument, "unknown index kind");
}

}  // namespace mvpure
