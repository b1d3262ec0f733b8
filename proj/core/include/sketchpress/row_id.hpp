#pragma once

#include <sketchpress/linalg.hpp>
#include <sketchpress/sketch.hpp>
#include <sketchpress/snapshot_io.hpp>
#include <sketchpress/types.hpp>

#include <optional>
#include <string>
#include <vector>

namespace sketchpress {

/// Matrix the SPC-ID row selection runs on.
enum class IdTarget : std::uint8_t {
  Coarse = 0,        // A_c (or A_c Omega when a projection is composed)
  LeadingBasis = 1,  // U_c(:, 1:k)
};

std::string_view to_string(IdTarget target);
IdTarget parse_id_target(std::string_view name);

/// A ~= P * skeleton (* lifting). P(I, :) is the identity.
struct RowIDFactors {
  Matrix P;                       // m x k
  IndexList I;                    // k distinct zero-based row indices
  Matrix skeleton;                // k x w: fine rows (w = n) or coarse rows (w = n_c)
  std::optional<Matrix> lifting;  // T_r, n_c x n
  Index r = 0;                    // lifting rank, 0 without lifting
  std::vector<std::string> warnings;

  Index k() const { return static_cast<Index>(I.size()); }
  /// k x n right factor: skeleton, times T_r when present.
  Matrix right_factor() const { return lifting ? Matrix(skeleton * *lifting) : skeleton; }
  Matrix reconstruct() const { return P * right_factor(); }
};

/// Rank-k row ID by pivoted QR of M^T. The interpolation coefficients solve
/// R_11 C = R_12 by back substitution, falling back to the pseudo-inverse of
/// R_11 when its diagonal underflows.
RowIDFactors row_id(const Eigen::Ref<const Matrix>& m, Index k);

/// Two-pass ID: row selection on A_c, fine skeleton rows gathered in pass 2.
RowIDFactors tpc_id(SnapshotStream& stream, const SketchOperator& sketch, Index k,
                    Index block_rows = kDefaultBlockRows);

struct LiftingOperator {
  Matrix T;  // n_c x n
  Index r = 0;
  std::vector<std::string> warnings;
};

/// T_r = A_c^+ U_r U_r^T A_f evaluated from the coarse SVD and H = A_f^T A_c
/// as V_r S_r^{-2} V_r^T H^T, with S^+ cut off at kPinvThreshold. A rank above
/// rank(A_c) is clamped with a warning.
LiftingOperator build_lifting(const ThinSVD& coarse_svd, const Eigen::Ref<const Matrix>& cross, Index r);

struct SpcIdOptions {
  std::optional<Index> r;  // default min(2k, rank(A_c))
  IdTarget target = IdTarget::Coarse;
};

/// Single-pass ID with lifting. With a projection composed on the sketch, the
/// row selection runs on A_c Omega; A_c, H and the skeleton stay unprojected.
RowIDFactors spc_id(SnapshotStream& stream, const SketchOperator& sketch, Index k,
                    const SpcIdOptions& options = {}, Index block_rows = kDefaultBlockRows);

/// Post-accumulation half of spc_id. `selection` replaces A_c as the matrix
/// the row ID runs on when the target is Coarse (nullptr: use A_c).
RowIDFactors spc_id_from_accumulators(const Matrix& coarse, const Matrix& cross, Index k,
                                      const SpcIdOptions& options, const Matrix* selection = nullptr);

}  // namespace sketchpress
