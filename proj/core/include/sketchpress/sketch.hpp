#pragma once

#include <sketchpress/types.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sketchpress {

enum class SketchKind : std::uint8_t {
  DirectInjection = 0,
  NearestNeighbor = 1,
  GlobalAverage = 2,
  GaussianDense = 3,
};

std::string_view to_string(SketchKind kind);
SketchKind parse_sketch_kind(std::string_view name);

/// Parameters of a column sketch D : R^n -> R^{n_c}, optionally followed by an
/// unscaled Gaussian projection Omega : R^{n_c} -> R^{ell}.
struct SketchSpec {
  SketchKind kind = SketchKind::DirectInjection;
  Index n = 0;
  Index n_c = 0;
  Index d = 1;                   // nearest-neighbour half width
  std::vector<double> weights;   // 2d+1 stencil weights, nearest-neighbour only
  std::uint64_t seed = 0;        // GaussianDense entries and Omega
  std::optional<Index> ell;      // secondary projection width

  /// s = ceil(n / n_c).
  Index subsample_factor() const;

  /// Throws ConfigError naming the violated constraint.
  void validate() const;

  bool operator==(const SketchSpec&) const = default;
};

/// Hat-shaped weights (d+1-|t|), normalised to sum to one. For d = 1 this is
/// [1/4, 1/2, 1/4].
std::vector<double> default_neighbor_weights(Index d);

/// Spec with n_c derived from a coarsening factor n / n_c (rounded, >= 1).
SketchSpec sketch_spec_for_coarsening(SketchKind kind, Index n, double coarsening_factor);

/// Implicit row-wise sketch. Immutable once built; apply() is reentrant.
///
/// Deterministic kinds keep a compressed stencil table per coarse column
/// (index, weight); only GaussianDense holds a dense n x n_c block.
class SketchOperator {
 public:
  explicit SketchOperator(SketchSpec spec);

  const SketchSpec& spec() const { return spec_; }
  Index input_dim() const { return spec_.n; }
  Index coarse_dim() const { return spec_.n_c; }
  /// Width of apply() output: ell when a projection is composed, else n_c.
  Index output_dim() const { return spec_.ell.value_or(spec_.n_c); }

  bool has_projection() const { return omega_.size() > 0; }
  /// The n_c x ell Gaussian block. Empty without a projection.
  const Matrix& projection() const { return omega_; }

  /// Full map: coarse sketch followed by the projection, if any.
  RowBlock apply(const Eigen::Ref<const RowBlock>& block) const;
  /// Deterministic (or dense Gaussian) part only, width n_c.
  RowBlock apply_coarse(const Eigen::Ref<const RowBlock>& block) const;
  /// Applies only Omega to an already coarse block (identity without one).
  RowBlock project(const Eigen::Ref<const RowBlock>& coarse) const;

  /// Number of fine entries feeding coarse column j.
  Index stencil_size(Index j) const;

  /// Same operator without the Gaussian projection.
  SketchOperator coarse_only() const;

 private:
  SketchSpec spec_;
  std::vector<Index> offsets_;
  std::vector<Index> indices_;
  std::vector<double> values_;
  Matrix dense_;
  Matrix omega_;
};

SketchOperator build_sketch(const SketchSpec& spec);
RowBlock apply_sketch(const SketchOperator& op, const Eigen::Ref<const RowBlock>& block);

/// Adds an unscaled N(0,1) projection of width ell (< n_c) drawn from `seed`.
SketchOperator compose_gaussian(const SketchOperator& op, Index ell, std::uint64_t seed);

/// Column sub-block, order preserved. Indices are zero-based and distinct.
RowBlock gather_columns(const Eigen::Ref<const RowBlock>& block, std::span<const Index> idx);

/// Dense n x output_dim() matrix D with apply(x) == x * D. Test oracle; O(n n_c)
/// memory.
Matrix explicit_matrix(const SketchOperator& op);

/// Uniform stride column selection {0, stride, 2*stride, ...} below n.
IndexList strided_columns(Index n, Index stride);

}  // namespace sketchpress
