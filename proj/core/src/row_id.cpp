#include <sketchpress/row_id.hpp>

#include <sketchpress/error.hpp>

#include "streaming.hpp"

#include <algorithm>
#include <unordered_map>

namespace sketchpress {

std::string_view to_string(IdTarget target) {
  return target == IdTarget::Coarse ? "coarse" : "leading-basis";
}

IdTarget parse_id_target(std::string_view name) {
  if (name == "coarse" || name == "ac") return IdTarget::Coarse;
  if (name == "leading-basis" || name == "uc") return IdTarget::LeadingBasis;
  throw ConfigError("unknown ID target '" + std::string(name) + "' (expected coarse or leading-basis)");
}

RowIDFactors row_id(const Eigen::Ref<const Matrix>& m, Index k) {
  detail::check_rank(k, std::min(m.rows(), m.cols()), "row_id");
  const Index rows = m.rows();
  const PivotedQR pqr = pivoted_qr(m.transpose(), k);

  RowIDFactors out;
  out.I.assign(pqr.perm.begin(), pqr.perm.begin() + k);

  const Matrix r11 = pqr.R.leftCols(k);
  const Matrix r12 = pqr.R.rightCols(rows - k);
  Matrix coeff(k, rows - k);
  if (rows > k) {
    const Vector diag = r11.diagonal().cwiseAbs();
    if (diag.minCoeff() > kPinvThreshold * diag.maxCoeff()) {
      coeff = r11.triangularView<Eigen::Upper>().solve(r12);
    } else {
      out.warnings.emplace_back("row_id: R11 is numerically singular; used its pseudo-inverse");
      coeff = pinv(r11) * r12;
    }
  }

  out.P = Matrix::Zero(rows, k);
  for (Index j = 0; j < k; ++j) out.P(out.I[static_cast<std::size_t>(j)], j) = 1.0;
  for (Index t = 0; t < rows - k; ++t) {
    out.P.row(pqr.perm[static_cast<std::size_t>(k + t)]) = coeff.col(t).transpose();
  }
  out.skeleton.resize(k, m.cols());
  for (Index j = 0; j < k; ++j) out.skeleton.row(j) = m.row(out.I[static_cast<std::size_t>(j)]);
  return out;
}

RowIDFactors tpc_id(SnapshotStream& stream, const SketchOperator& sketch, Index k, Index block_rows) {
  detail::check_stream_matches(stream, sketch);
  detail::check_rank(k, std::min(stream.rows(), sketch.output_dim()), "tpc_id");

  const auto acc = detail::accumulate_coarse(stream, sketch, block_rows, false);
  RowIDFactors out = row_id(acc.coarse, k);

  std::unordered_map<Index, Index> slot;
  for (Index j = 0; j < k; ++j) slot.emplace(out.I[static_cast<std::size_t>(j)], j);
  out.skeleton.resize(k, stream.cols());
  for_each_block(stream, block_rows, [&](const RowBlock& block, Index first) {
    for (Index i = 0; i < block.rows(); ++i) {
      const auto it = slot.find(first + i);
      if (it != slot.end()) out.skeleton.row(it->second) = block.row(i);
    }
  });
  return out;
}

LiftingOperator build_lifting(const ThinSVD& coarse_svd, const Eigen::Ref<const Matrix>& cross, Index r) {
  if (cross.cols() != coarse_svd.V.rows()) {
    throw ConfigError("build_lifting: H has " + std::to_string(cross.cols()) + " columns, A_c has " +
                      std::to_string(coarse_svd.V.rows()));
  }
  if (r < 1) throw ConfigError("build_lifting: lifting rank must be >= 1");
  LiftingOperator out;
  const Index rank = numerical_rank(coarse_svd.S);
  if (rank == 0) throw NumericalError("build_lifting: coarse matrix is numerically zero");
  if (r > rank) {
    out.warnings.push_back("lifting rank " + std::to_string(r) + " exceeds rank(A_c) = " +
                           std::to_string(rank) + "; clamped");
    r = rank;
  }
  out.r = r;
  const Vector inv = pinv_apply(coarse_svd.S).head(r);
  const Matrix vr = coarse_svd.V.leftCols(r);
  out.T = vr * inv.cwiseAbs2().asDiagonal() * (vr.transpose() * cross.transpose());
  return out;
}

RowIDFactors spc_id_from_accumulators(const Matrix& coarse, const Matrix& cross, Index k,
                                      const SpcIdOptions& options, const Matrix* selection) {
  const Matrix& select = selection ? *selection : coarse;
  if (select.rows() != coarse.rows()) throw ConfigError("spc_id: selection matrix row count mismatch");
  detail::check_rank(k, std::min(select.rows(), select.cols()), "spc_id");
  if (options.r && *options.r < k) {
    throw ConfigError("spc_id: lifting rank r=" + std::to_string(*options.r) + " must be >= k=" +
                      std::to_string(k));
  }

  const ThinSVD svd = thin_svd(coarse);
  const Index rank = numerical_rank(svd.S);
  const Index r = options.r.value_or(std::max<Index>(1, std::min(2 * k, rank)));
  LiftingOperator lift = build_lifting(svd, cross, r);

  RowIDFactors out;
  if (options.target == IdTarget::LeadingBasis) {
    if (k > svd.U.cols()) throw ConfigError("spc_id: k exceeds the coarse basis width");
    out = row_id(svd.U.leftCols(k), k);
  } else {
    out = row_id(select, k);
  }
  out.skeleton.resize(k, coarse.cols());
  for (Index j = 0; j < k; ++j) out.skeleton.row(j) = coarse.row(out.I[static_cast<std::size_t>(j)]);
  if (rank < k) {
    out.warnings.push_back("rank(A_c) = " + std::to_string(rank) + " is below k = " + std::to_string(k));
  }
  out.r = lift.r;
  out.lifting = std::move(lift.T);
  for (auto& w : lift.warnings) out.warnings.push_back(std::move(w));
  return out;
}

RowIDFactors spc_id(SnapshotStream& stream, const SketchOperator& sketch, Index k,
                    const SpcIdOptions& options, Index block_rows) {
  detail::check_stream_matches(stream, sketch);
  detail::check_rank(k, std::min(stream.rows(), sketch.output_dim()), "spc_id");
  if (options.r && *options.r < k) {
    throw ConfigError("spc_id: lifting rank r=" + std::to_string(*options.r) + " must be >= k=" +
                      std::to_string(k));
  }
  const SketchOperator coarse_op = sketch.coarse_only();
  const auto acc = detail::accumulate_coarse(stream, coarse_op, block_rows, true);
  if (!sketch.has_projection()) return spc_id_from_accumulators(acc.coarse, acc.cross, k, options);
  const Matrix projected = acc.coarse * sketch.projection();
  return spc_id_from_accumulators(acc.coarse, acc.cross, k, options, &projected);
}

}  // namespace sketchpress
