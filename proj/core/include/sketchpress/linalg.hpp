#pragma once

#include <sketchpress/types.hpp>

#include <string_view>

namespace sketchpress {

/// Relative cutoff used wherever a pseudo-inverse or numerical rank is needed.
inline constexpr double kPinvThreshold = 1e-12;

struct ThinQR {
  Matrix Q;  // m x min(m, n), orthonormal columns
  Matrix R;  // min(m, n) x n, upper triangular
};

struct ThinSVD {
  Matrix U;  // m x r
  Vector S;  // r values, non-increasing
  Matrix V;  // n x r
};

/// Column-pivoted QR truncated at rank k: M(:, perm) ~= Q R.
struct PivotedQR {
  Matrix Q;        // m x k
  Matrix R;        // k x n, leading k x k block upper triangular
  IndexList perm;  // pivots first, then the remaining columns in ascending order
};

/// Throws NumericalError if any entry is NaN or infinite.
void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what);

/// Householder thin QR. Columns of Q are sign-normalised so that the first
/// non-negligible entry is positive (the matching row of R is flipped).
ThinQR thin_qr(const Eigen::Ref<const Matrix>& m);

/// Thin SVD with the same sign convention applied to U (V follows).
ThinSVD thin_svd(const Eigen::Ref<const Matrix>& m);

/// Singular values only, non-increasing.
Vector singular_values(const Eigen::Ref<const Matrix>& m);

/// Greedy column-pivoted QR by modified Gram-Schmidt with one
/// reorthogonalisation sweep. Ties go to the lowest column index.
PivotedQR pivoted_qr(const Eigen::Ref<const Matrix>& m, Index k);

/// Reciprocals of `s` with entries <= threshold * s[0] mapped to zero.
Vector pinv_apply(const Eigen::Ref<const Vector>& s, double threshold = kPinvThreshold);

/// Moore-Penrose pseudo-inverse via the thin SVD and pinv_apply.
Matrix pinv(const Eigen::Ref<const Matrix>& m, double threshold = kPinvThreshold);

/// Number of singular values above threshold * s[0].
Index numerical_rank(const Eigen::Ref<const Vector>& s, double threshold = kPinvThreshold);

/// Largest (signed) eigenvalue of a symmetric matrix. Throws ConfigError when
/// the input is not symmetric to 1e-10 relative.
double lambda_max(const Eigen::Ref<const Matrix>& sym);

/// Largest singular value; zero for an empty matrix.
double spectral_norm(const Eigen::Ref<const Matrix>& m);

/// Flips columns of q (and the matching rows of r / columns of v, when given)
/// so that the first entry above 1e-12 relative in each column is positive.
void normalize_signs(Matrix& q, Matrix* r_rows = nullptr, Matrix* v_cols = nullptr);

}  // namespace sketchpress
