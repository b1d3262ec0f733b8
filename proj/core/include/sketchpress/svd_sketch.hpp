#pragma once

#include <sketchpress/sketch.hpp>
#include <sketchpress/snapshot_io.hpp>
#include <sketchpress/types.hpp>

#include <string>
#include <vector>

namespace sketchpress {

enum class SvdProvenance : std::uint8_t { ProtoTpc, TpcSvd, SpcSvd, WithPower };

/// Rank-k factors U_k diag(S_k) V_k^T.
struct LowRankSVD {
  Matrix U;  // m x k
  Vector S;  // k, non-increasing
  Matrix V;  // n x k
  Index k = 0;
  SvdProvenance provenance = SvdProvenance::TpcSvd;
  bool v_orthonormal = true;  // false for ProtoTpc
  std::vector<std::string> warnings;

  Matrix reconstruct() const { return U * S.asDiagonal() * V.transpose(); }
};

/// Prototype two-pass SVD. U_k, S_k come from the SVD of A_c; the second pass
/// forms V_k = A_f^T U_k S_k^{-1}, which is in general not orthonormal.
/// Throws NumericalError if S_k[k-1] falls below the pseudo-inverse cutoff.
LowRankSVD proto_tpc(SnapshotStream& stream, const SketchOperator& sketch, Index k,
                     Index block_rows = kDefaultBlockRows);

/// Two-pass SVD: Q_c from A_c, then B = Q_c^T A_f on the second pass.
/// Throws NumericalError if rank(A_c) < k.
LowRankSVD tpc_svd(SnapshotStream& stream, const SketchOperator& sketch, Index k,
                   Index block_rows = kDefaultBlockRows);

/// Single-pass SVD from the accumulators A_c and H = A_f^T A_c. B^T is
/// recovered as H R_c^{-1}; a rank-deficient R_c falls back to its
/// pseudo-inverse and records a warning.
LowRankSVD spc_svd(SnapshotStream& stream, const SketchOperator& sketch, Index k,
                   Index block_rows = kDefaultBlockRows);

/// The post-accumulation half of spc_svd, exposed for pipelines that gather
/// A_c and H themselves.
LowRankSVD spc_svd_from_accumulators(const Matrix& coarse, const Matrix& cross, Index k);

}  // namespace sketchpress
