#include <sketchpress/svd_sketch.hpp>

#include <sketchpress/error.hpp>
#include <sketchpress/linalg.hpp>

#include "streaming.hpp"

#include <algorithm>
#include <cmath>

namespace sketchpress {

namespace {

LowRankSVD truncate(const Matrix& basis, const ThinSVD& small, Index k, SvdProvenance provenance) {
  LowRankSVD out;
  out.k = k;
  out.provenance = provenance;
  out.U = basis * small.U.leftCols(k);
  out.S = small.S.head(k);
  out.V = small.V.leftCols(k);
  return out;
}

}  // namespace

LowRankSVD proto_tpc(SnapshotStream& stream, const SketchOperator& sketch, Index k, Index block_rows) {
  detail::check_stream_matches(stream, sketch);
  detail::check_rank(k, std::min(stream.rows(), sketch.output_dim()), "proto_tpc");

  const auto acc = detail::accumulate_coarse(stream, sketch, block_rows, false);
  const ThinSVD coarse = thin_svd(acc.coarse);
  const Vector s = coarse.S.head(k);
  if (!(s[k - 1] > kPinvThreshold * s[0])) {
    throw NumericalError("proto_tpc: coarse singular value " + std::to_string(k) +
                         " is below the pseudo-inverse cutoff (A_c has rank < k)");
  }

  LowRankSVD out;
  out.k = k;
  out.provenance = SvdProvenance::ProtoTpc;
  out.v_orthonormal = false;
  out.U = coarse.U.leftCols(k);
  out.S = s;
  out.V = Matrix::Zero(stream.cols(), k);
  for_each_block(stream, block_rows, [&](const RowBlock& block, Index first) {
    out.V.noalias() += block.transpose() * out.U.middleRows(first, block.rows());
  });
  out.V = out.V * s.cwiseInverse().asDiagonal();
  return out;
}

LowRankSVD tpc_svd(SnapshotStream& stream, const SketchOperator& sketch, Index k, Index block_rows) {
  detail::check_stream_matches(stream, sketch);
  detail::check_rank(k, std::min(stream.rows(), sketch.output_dim()), "tpc_svd");

  const auto acc = detail::accumulate_coarse(stream, sketch, block_rows, false);
  const ThinQR qr = thin_qr(acc.coarse);
  const Index achieved = numerical_rank(singular_values(qr.R));
  if (achieved < k) {
    throw NumericalError("tpc_svd: rank(A_c) = " + std::to_string(achieved) + " is below k = " +
                         std::to_string(k));
  }

  Matrix b = Matrix::Zero(qr.Q.cols(), stream.cols());
  for_each_block(stream, block_rows, [&](const RowBlock& block, Index first) {
    b.noalias() += qr.Q.middleRows(first, block.rows()).transpose() * block;
  });
  return truncate(qr.Q, thin_svd(b), k, SvdProvenance::TpcSvd);
}

LowRankSVD spc_svd_from_accumulators(const Matrix& coarse, const Matrix& cross, Index k) {
  if (cross.cols() != coarse.cols()) throw ConfigError("spc_svd: accumulator widths disagree");
  detail::check_rank(k, std::min({coarse.rows(), coarse.cols(), cross.rows()}), "spc_svd");

  const ThinQR qr = thin_qr(coarse);
  std::vector<std::string> warnings;
  Matrix bt;  // n x r0, approximates A_f^T Q_c
  const Vector diag = qr.R.diagonal().cwiseAbs();
  const bool square = qr.R.rows() == qr.R.cols();
  if (square && diag.minCoeff() > kPinvThreshold * diag.maxCoeff()) {
    bt = qr.R.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(cross);
  } else {
    warnings.emplace_back(square ? "R_c is numerically singular; used its pseudo-inverse"
                                 : "R_c is not square (m < n_c); used its pseudo-inverse");
    bt = cross * pinv(qr.R);
  }
  require_finite(bt, "spc_svd");

  LowRankSVD out = truncate(qr.Q, thin_svd(bt.transpose()), k, SvdProvenance::SpcSvd);
  out.warnings = std::move(warnings);
  return out;
}

LowRankSVD spc_svd(SnapshotStream& stream, const SketchOperator& sketch, Index k, Index block_rows) {
  detail::check_stream_matches(stream, sketch);
  detail::check_rank(k, std::min(stream.rows(), sketch.output_dim()), "spc_svd");
  const auto acc = detail::accumulate_coarse(stream, sketch, block_rows, true);
  return spc_svd_from_accumulators(acc.coarse, acc.cross, k);
}

}  // namespace sketchpress
