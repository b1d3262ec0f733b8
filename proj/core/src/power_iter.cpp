#include <sketchpress/power_iter.hpp>

#include <sketchpress/error.hpp>
#include <sketchpress/linalg.hpp>

#include "streaming.hpp"

#include <algorithm>
#include <unordered_map>

namespace sketchpress {

namespace {

void check_finite_growth(const Matrix& g, Index step) {
  if (!g.allFinite()) {
    throw NumericalError("C-PWR: non-finite values after power step " + std::to_string(step) +
                         "; enable reorthonormalisation (--reorth)");
  }
}

void check_columns(const IndexList& columns, Index k, Index width) {
  const auto count = static_cast<Index>(columns.size());
  if (count <= k) {
    throw ConfigError("C-PWR: column set size |I|=" + std::to_string(count) + " must exceed k=" +
                      std::to_string(k));
  }
  if (count < width) {
    throw ConfigError("C-PWR: column set size |I|=" + std::to_string(count) +
                      " must be at least the sketch width " + std::to_string(width));
  }
}

struct PowerAccumulators {
  Matrix s0;     // A_f D (with the projection, if any)
  Matrix c;      // A_f(:, I)
  Matrix cross;  // A_f^T C for the SVD pipeline, A_f^T A_c for the ID pipeline
};

PowerAccumulators accumulate(SnapshotStream& stream, const SketchOperator& sketch, const IndexList& columns,
                             Index block_rows, bool cross_with_c, bool want_cross) {
  detail::check_stream_matches(stream, sketch);
  PowerAccumulators acc;
  const auto width = static_cast<Index>(columns.size());
  acc.s0.resize(stream.rows(), sketch.output_dim());
  acc.c.resize(stream.rows(), width);
  if (want_cross) acc.cross = Matrix::Zero(stream.cols(), cross_with_c ? width : sketch.output_dim());
  for_each_block(stream, block_rows, [&](const RowBlock& block, Index first) {
    const RowBlock sketched = sketch.apply(block);
    const RowBlock gathered = gather_columns(block, columns);
    acc.s0.middleRows(first, block.rows()) = sketched;
    acc.c.middleRows(first, block.rows()) = gathered;
    if (want_cross) acc.cross.noalias() += block.transpose() * (cross_with_c ? gathered : sketched);
  });
  return acc;
}

}  // namespace

std::string_view to_string(FinalizeMode mode) {
  return mode == FinalizeMode::SinglePass ? "single-pass" : "two-pass";
}

IndexList PowerConfig::resolve_columns(Index n) const {
  if (!columns.empty()) return columns;
  return strided_columns(n, column_stride);
}

RangeBasis cpwr_range(const Eigen::Ref<const Matrix>& c, const Eigen::Ref<const Matrix>& s0,
                      const PowerConfig& cfg) {
  if (c.rows() != s0.rows()) throw ConfigError("C-PWR: C and S0 must have the same row count");
  if (cfg.q < 0) throw ConfigError("C-PWR: power count q must be >= 0");
  require_finite(c, "C-PWR");
  require_finite(s0, "C-PWR");

  Matrix g = s0;
  for (Index step = 1; step <= cfg.q; ++step) {
    g = c.transpose() * g;
    if (cfg.reorth) g = thin_qr(g).Q;
    g = c * g;
    if (cfg.reorth) g = thin_qr(g).Q;
    check_finite_growth(g, step);
  }
  RangeBasis out;
  ThinQR qr = thin_qr(g);
  const Vector diag = qr.R.diagonal().cwiseAbs();
  if (qr.R.rows() == qr.R.cols() && diag.size() > 0 && diag.minCoeff() > kPinvThreshold * diag.maxCoeff()) {
    out.Qb = std::move(qr.Q);
    out.Rb = std::move(qr.R);
  } else {
    // Rank-deficient G (e.g. repeated sketch columns): Householder would pad
    // Q_b with arbitrary directions, so keep only range(G) and G = Q_b R_b.
    const ThinSVD svd = thin_svd(g);
    const Index r = numerical_rank(svd.S);
    out.Qb = svd.U.leftCols(r);
    out.Rb = svd.S.head(r).asDiagonal() * svd.V.leftCols(r).transpose();
  }
  out.Qnp = cfg.q == 0 ? out.Qb : thin_qr(s0).Q;
  out.G = std::move(g);
  return out;
}

LowRankSVD finalize_svd_two_pass(SnapshotStream& stream, const RangeBasis& basis, Index k, Index block_rows) {
  if (basis.Qb.rows() != stream.rows()) throw ConfigError("C-PWR: basis row count does not match the stream");
  detail::check_rank(k, std::min(basis.Qb.cols(), stream.cols()), "C-PWR finalize");
  Matrix b = Matrix::Zero(basis.Qb.cols(), stream.cols());
  for_each_block(stream, block_rows, [&](const RowBlock& block, Index first) {
    b.noalias() += basis.Qb.middleRows(first, block.rows()).transpose() * block;
  });
  const ThinSVD small = thin_svd(b);
  LowRankSVD out;
  out.k = k;
  out.provenance = SvdProvenance::WithPower;
  out.U = basis.Qb * small.U.leftCols(k);
  out.S = small.S.head(k);
  out.V = small.V.leftCols(k);
  return out;
}

LowRankSVD finalize_svd_single_pass(const RangeBasis& basis, const Eigen::Ref<const Matrix>& c,
                                    const Eigen::Ref<const Matrix>& s0,
                                    const Eigen::Ref<const Matrix>& cross, const PowerConfig& cfg,
                                    Index k) {
  if (cfg.reorth) {
    throw ConfigError("C-PWR: single-pass finalize is invalid with reorthonormalisation; use two-pass");
  }
  if (cfg.q < 1) throw ConfigError("C-PWR: single-pass finalize needs q >= 1");
  if (cross.cols() != c.cols()) throw ConfigError("C-PWR: H_c must be n x |I|");
  detail::check_rank(k, std::min(basis.Qb.cols(), cross.rows()), "C-PWR finalize");

  Matrix w = c.transpose() * s0;  // (C^T C)^{q-1} C^T S0
  for (Index step = 1; step < cfg.q; ++step) w = c.transpose() * (c * w);
  const Matrix afg = cross * w;  // A_f^T G

  LowRankSVD out;
  const Matrix& r = basis.Rb;
  const Vector diag = r.diagonal().cwiseAbs();
  Matrix bt;
  if (r.rows() == r.cols() && diag.minCoeff() > kPinvThreshold * diag.maxCoeff()) {
    bt = r.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(afg);
  } else {
    out.warnings.emplace_back("R_b is numerically singular; used its pseudo-inverse");
    bt = afg * pinv(r);
  }
  require_finite(bt, "C-PWR finalize");

  const ThinSVD small = thin_svd(bt.transpose());
  out.k = k;
  out.provenance = SvdProvenance::WithPower;
  out.U = basis.Qb * small.U.leftCols(k);
  out.S = small.S.head(k);
  out.V = small.V.leftCols(k);
  return out;
}

LowRankSVD spc_svd_pwr(SnapshotStream& stream, const SketchOperator& sketch, Index k, const PowerConfig& cfg,
                       Index block_rows) {
  detail::check_stream_matches(stream, sketch);
  detail::check_rank(k, std::min(stream.rows(), sketch.output_dim()), "spc_svd_pwr");
  if (cfg.q < 0) throw ConfigError("C-PWR: power count q must be >= 0");
  const bool single = cfg.mode == FinalizeMode::SinglePass;
  if (single && cfg.reorth) {
    throw ConfigError("C-PWR: single-pass finalize is invalid with reorthonormalisation; use two-pass");
  }
  if (cfg.q == 0) {
    LowRankSVD out = single ? spc_svd(stream, sketch, k, block_rows) : tpc_svd(stream, sketch, k, block_rows);
    out.provenance = SvdProvenance::WithPower;
    return out;
  }
  const IndexList columns = cfg.resolve_columns(stream.cols());
  check_columns(columns, k, sketch.output_dim());

  const auto acc = accumulate(stream, sketch, columns, block_rows, true, single);
  const RangeBasis basis = cpwr_range(acc.c, acc.s0, cfg);
  if (single) return finalize_svd_single_pass(basis, acc.c, acc.s0, acc.cross, cfg, k);
  return finalize_svd_two_pass(stream, basis, k, block_rows);
}

RowIDFactors spc_id_pwr(SnapshotStream& stream, const SketchOperator& sketch, Index k,
                        const SpcIdOptions& options, const PowerConfig& cfg, Index block_rows) {
  detail::check_stream_matches(stream, sketch);
  detail::check_rank(k, std::min(stream.rows(), sketch.output_dim()), "spc_id_pwr");
  if (cfg.q < 0) throw ConfigError("C-PWR: power count q must be >= 0");
  if (options.r && *options.r < k) {
    throw ConfigError("spc_id: lifting rank r=" + std::to_string(*options.r) + " must be >= k=" +
                      std::to_string(k));
  }
  const bool single = cfg.mode == FinalizeMode::SinglePass;
  const IndexList columns = cfg.resolve_columns(stream.cols());
  if (cfg.q > 0) check_columns(columns, k, 0);

  const SketchOperator coarse_op = sketch.coarse_only();
  const auto acc = accumulate(stream, coarse_op, columns, block_rows, false, single);
  const Matrix selection_seed = sketch.has_projection() ? Matrix(acc.s0 * sketch.projection()) : acc.s0;
  const RangeBasis basis = cpwr_range(acc.c, selection_seed, cfg);

  if (single) return spc_id_from_accumulators(acc.s0, acc.cross, k, options, &basis.G);

  RowIDFactors out = options.target == IdTarget::LeadingBasis
                         ? row_id(thin_svd(acc.s0).U.leftCols(k), k)
                         : row_id(basis.G, k);
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

}  // namespace sketchpress
