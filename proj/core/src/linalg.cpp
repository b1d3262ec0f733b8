#include <sketchpress/linalg.hpp>

#include <sketchpress/error.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace sketchpress {

void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what) {
  if (!m.allFinite()) throw NumericalError(std::string(what) + ": non-finite entries");
}

void normalize_signs(Matrix& q, Matrix* r_rows, Matrix* v_cols) {
  for (Index j = 0; j < q.cols(); ++j) {
    const double scale = q.col(j).cwiseAbs().maxCoeff();
    if (scale == 0.0) continue;
    for (Index i = 0; i < q.rows(); ++i) {
      const double v = q(i, j);
      if (std::abs(v) <= 1e-12 * scale) continue;
      if (v < 0.0) {
        q.col(j) = -q.col(j);
        if (r_rows) r_rows->row(j) = -r_rows->row(j);
        if (v_cols) v_cols->col(j) = -v_cols->col(j);
      }
      break;
    }
  }
}

ThinQR thin_qr(const Eigen::Ref<const Matrix>& m) {
  require_finite(m, "thin_qr");
  const Index r = std::min(m.rows(), m.cols());
  ThinQR out;
  if (r == 0) {
    out.Q = Matrix::Zero(m.rows(), 0);
    out.R = Matrix::Zero(0, m.cols());
    return out;
  }
  Eigen::HouseholderQR<Matrix> qr(m);
  out.Q = qr.householderQ() * Matrix::Identity(m.rows(), r);
  out.R = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  normalize_signs(out.Q, &out.R);
  return out;
}

ThinSVD thin_svd(const Eigen::Ref<const Matrix>& m) {
  require_finite(m, "thin_svd");
  ThinSVD out;
  if (m.size() == 0) {
    const Index r = std::min(m.rows(), m.cols());
    out.U = Matrix::Zero(m.rows(), r);
    out.S = Vector::Zero(r);
    out.V = Matrix::Zero(m.cols(), r);
    return out;
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("thin_svd: backend did not converge");
  out.U = svd.matrixU();
  out.S = svd.singularValues();
  out.V = svd.matrixV();
  if (!out.U.allFinite() || !out.S.allFinite() || !out.V.allFinite()) {
    throw NumericalError("thin_svd: backend produced non-finite factors");
  }
  normalize_signs(out.U, nullptr, &out.V);
  return out;
}

Vector singular_values(const Eigen::Ref<const Matrix>& m) {
  require_finite(m, "singular_values");
  if (m.size() == 0) return Vector::Zero(0);
  Eigen::BDCSVD<Matrix> svd(m);
  if (svd.info() != Eigen::Success) throw NumericalError("singular_values: backend did not converge");
  return svd.singularValues();
}

PivotedQR pivoted_qr(const Eigen::Ref<const Matrix>& m, Index k) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  if (k < 1 || k > std::min(rows, cols)) {
    throw ConfigError("pivoted_qr: rank k=" + std::to_string(k) + " must lie in [1, " +
                      std::to_string(std::min(rows, cols)) + "]");
  }
  require_finite(m, "pivoted_qr");

  Matrix w = m;
  Matrix q(rows, k);
  std::vector<bool> taken(static_cast<std::size_t>(cols), false);
  IndexList pivots;
  pivots.reserve(static_cast<std::size_t>(k));

  const double scale = m.colwise().norm().maxCoeff();
  const double negligible = 1e-14 * scale;

  for (Index j = 0; j < k; ++j) {
    Index best = -1;
    double best_norm = -1.0;
    for (Index c = 0; c < cols; ++c) {
      if (taken[static_cast<std::size_t>(c)]) continue;
      const double nrm = w.col(c).norm();
      if (nrm > best_norm) {
        best_norm = nrm;
        best = c;
      }
    }
    taken[static_cast<std::size_t>(best)] = true;
    pivots.push_back(best);

    Vector v;
    if (best_norm > negligible && best_norm > 0.0) {
      v = w.col(best);
    } else {
      // Residual is exhausted: extend Q with the standard basis vector that is
      // least represented in the current span.
      Index pick = 0;
      double pick_norm = -1.0;
      for (Index i = 0; i < rows; ++i) {
        Vector e = Vector::Unit(rows, i);
        if (j > 0) e -= q.leftCols(j) * q.leftCols(j).row(i).transpose();
        const double nrm = e.norm();
        if (nrm > pick_norm) {
          pick_norm = nrm;
          pick = i;
        }
      }
      v = Vector::Unit(rows, pick);
    }
    for (int sweep = 0; sweep < 2 && j > 0; ++sweep) {
      v -= q.leftCols(j) * (q.leftCols(j).transpose() * v);
    }
    v /= v.norm();
    q.col(j) = v;

    for (Index c = 0; c < cols; ++c) {
      if (taken[static_cast<std::size_t>(c)]) continue;
      w.col(c) -= v * v.dot(w.col(c));
    }
  }

  PivotedQR out;
  out.perm = pivots;
  for (Index c = 0; c < cols; ++c) {
    if (!taken[static_cast<std::size_t>(c)]) out.perm.push_back(c);
  }
  Matrix permuted(rows, cols);
  for (Index c = 0; c < cols; ++c) permuted.col(c) = m.col(out.perm[static_cast<std::size_t>(c)]);
  out.R = q.transpose() * permuted;
  for (Index i = 1; i < k; ++i) out.R.row(i).head(i).setZero();
  out.Q = std::move(q);
  return out;
}

Vector pinv_apply(const Eigen::Ref<const Vector>& s, double threshold) {
  Vector out = Vector::Zero(s.size());
  if (s.size() == 0) return out;
  const double cut = threshold * s[0];
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i] > cut && s[i] > 0.0) out[i] = 1.0 / s[i];
  }
  return out;
}

Matrix pinv(const Eigen::Ref<const Matrix>& m, double threshold) {
  const ThinSVD svd = thin_svd(m);
  const Vector inv = pinv_apply(svd.S, threshold);
  return svd.V * inv.asDiagonal() * svd.U.transpose();
}

Index numerical_rank(const Eigen::Ref<const Vector>& s, double threshold) {
  if (s.size() == 0) return 0;
  const double cut = threshold * s[0];
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i] > cut && s[i] > 0.0) ++r;
  }
  return r;
}

double lambda_max(const Eigen::Ref<const Matrix>& sym) {
  if (sym.rows() != sym.cols()) throw ConfigError("lambda_max: matrix is not square");
  if (sym.size() == 0) throw ConfigError("lambda_max: empty matrix");
  require_finite(sym, "lambda_max");
  const double scale = sym.cwiseAbs().maxCoeff();
  if ((sym - sym.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ConfigError("lambda_max: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("lambda_max: eigensolver did not converge");
  return eig.eigenvalues().maxCoeff();
}

double spectral_norm(const Eigen::Ref<const Matrix>& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

}  // namespace sketchpress
