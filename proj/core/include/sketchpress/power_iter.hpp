#pragma once

#include <sketchpress/row_id.hpp>
#include <sketchpress/sketch.hpp>
#include <sketchpress/snapshot_io.hpp>
#include <sketchpress/svd_sketch.hpp>

#include <optional>

namespace sketchpress {

enum class FinalizeMode : std::uint8_t { SinglePass = 0, TwoPass = 1 };

std::string_view to_string(FinalizeMode mode);

/// Coarse-grid power iteration settings. C = A_f(:, columns).
struct PowerConfig {
  Index q = 1;
  IndexList columns;  // empty: every column_stride-th column
  Index column_stride = 10;
  bool reorth = false;
  std::optional<double> tau;  // analysis only; never used by the iteration
  FinalizeMode mode = FinalizeMode::SinglePass;

  /// Explicit columns, or the strided default for a width-n matrix.
  IndexList resolve_columns(Index n) const;
};

struct RangeBasis {
  Matrix Qb;   // m x r orthonormal basis of range(G), r = numerical rank
  Matrix Rb;   // r x w with G = Qb Rb (triangular when G has full column rank)
  Matrix Qnp;  // basis of the unpowered sketch S0
  Matrix G;    // final iterate (C C^T)^q S0, or its orthonormalised form with reorth
};

/// G = (C C^T)^q S0 by alternating C^T and C products, with a QR between
/// products when cfg.reorth is set. q = 0 returns the basis of S0 itself.
/// Non-finite growth throws NumericalError suggesting reorthonormalisation.
RangeBasis cpwr_range(const Eigen::Ref<const Matrix>& c, const Eigen::Ref<const Matrix>& s0,
                      const PowerConfig& cfg);

/// B = Q_b^T A_f on an extra pass, then the rank-k SVD of B.
LowRankSVD finalize_svd_two_pass(SnapshotStream& stream, const RangeBasis& basis, Index k,
                                 Index block_rows = kDefaultBlockRows);

/// B^T = H_c (C^T C)^{q-1} (C^T S0) R_b^{-1} with H_c = A_f^T C, using no
/// data access. Requires q >= 1 and no reorthonormalisation.
LowRankSVD finalize_svd_single_pass(const RangeBasis& basis, const Eigen::Ref<const Matrix>& c,
                                    const Eigen::Ref<const Matrix>& s0,
                                    const Eigen::Ref<const Matrix>& cross, const PowerConfig& cfg,
                                    Index k);

/// SVD pipeline: one pass collects S0 = A_f D, C and H_c; the single-pass
/// mode finishes from those, the two-pass mode reads B on a second pass.
/// q = 0 reduces to spc_svd (or tpc_svd in two-pass mode).
LowRankSVD spc_svd_pwr(SnapshotStream& stream, const SketchOperator& sketch, Index k,
                       const PowerConfig& cfg, Index block_rows = kDefaultBlockRows);

/// ID pipeline: the row ID runs on (C C^T)^q A_c (A_c Omega with a
/// projection). Single-pass mode lifts with T_r as in spc_id; two-pass mode
/// gathers fine skeleton rows on a second pass.
RowIDFactors spc_id_pwr(SnapshotStream& stream, const SketchOperator& sketch, Index k,
                        const SpcIdOptions& options, const PowerConfig& cfg,
                        Index block_rows = kDefaultBlockRows);

}  // namespace sketchpress
