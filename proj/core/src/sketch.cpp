#include <sketchpress/sketch.hpp>

#include <sketchpress/error.hpp>
#include <sketchpress/random.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace sketchpress {

namespace {

constexpr std::uint64_t kDenseStream = 0;
constexpr std::uint64_t kProjectionStream = 1;

}  // namespace

std::string_view to_string(SketchKind kind) {
  switch (kind) {
    case SketchKind::DirectInjection: return "direct-injection";
    case SketchKind::NearestNeighbor: return "nearest-neighbor";
    case SketchKind::GlobalAverage: return "global-average";
    case SketchKind::GaussianDense: return "gaussian-dense";
  }
  return "unknown";
}

SketchKind parse_sketch_kind(std::string_view name) {
  if (name == "di" || name == "direct-injection") return SketchKind::DirectInjection;
  if (name == "nn" || name == "nearest-neighbor") return SketchKind::NearestNeighbor;
  if (name == "ga" || name == "global-average" || name == "global") return SketchKind::GlobalAverage;
  if (name == "gaussian" || name == "gaussian-dense") return SketchKind::GaussianDense;
  throw ConfigError("unknown sketch kind '" + std::string(name) + "'");
}

Index SketchSpec::subsample_factor() const {
  if (n_c < 1) return 0;
  return (n + n_c - 1) / n_c;
}

void SketchSpec::validate() const {
  if (n < 1) throw ConfigError("sketch: fine dimension n must be >= 1");
  if (n_c < 1 || n_c > n) {
    throw ConfigError("sketch: coarse dimension must satisfy 1 <= n_c <= n (n_c=" +
                      std::to_string(n_c) + ", n=" + std::to_string(n) + ")");
  }
  if (kind == SketchKind::NearestNeighbor) {
    if (d < 0) throw ConfigError("sketch: neighbour half-width d must be >= 0");
    if (static_cast<Index>(weights.size()) != 2 * d + 1) {
      throw ConfigError("sketch: nearest-neighbour stencil needs 2d+1 weights");
    }
    double sum = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("sketch: stencil weights must be nonnegative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-10) throw ConfigError("sketch: stencil weights must sum to 1");
  }
  if (ell) {
    if (*ell < 1 || *ell >= n_c) {
      throw ConfigError("sketch: projection width must satisfy 1 <= ell < n_c (ell=" +
                        std::to_string(*ell) + ", n_c=" + std::to_string(n_c) + ")");
    }
  }
}

std::vector<double> default_neighbor_weights(Index d) {
  if (d < 0) throw ConfigError("sketch: neighbour half-width d must be >= 0");
  std::vector<double> w(static_cast<std::size_t>(2 * d + 1));
  double sum = 0.0;
  for (Index t = -d; t <= d; ++t) {
    const double v = static_cast<double>(d + 1 - std::abs(t));
    w[static_cast<std::size_t>(t + d)] = v;
    sum += v;
  }
  for (auto& v : w) v /= sum;
  return w;
}

SketchSpec sketch_spec_for_coarsening(SketchKind kind, Index n, double coarsening_factor) {
  if (!(coarsening_factor >= 1.0)) throw ConfigError("coarsening factor must be >= 1");
  SketchSpec spec;
  spec.kind = kind;
  spec.n = n;
  spec.n_c = std::max<Index>(1, static_cast<Index>(std::llround(static_cast<double>(n) / coarsening_factor)));
  if (kind == SketchKind::NearestNeighbor) spec.weights = default_neighbor_weights(spec.d);
  return spec;
}

SketchOperator::SketchOperator(SketchSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const Index n = spec_.n;
  const Index nc = spec_.n_c;
  const Index s = spec_.subsample_factor();

  if (spec_.kind == SketchKind::GaussianDense) {
    dense_ = gaussian_matrix(n, nc, spec_.seed, kDenseStream);
  } else {
    offsets_.reserve(static_cast<std::size_t>(nc + 1));
    offsets_.push_back(0);
    for (Index j = 0; j < nc; ++j) {
      // Stencil centre (j-1)s+1 in one-based terms, clamped into the grid.
      const Index centre = std::min(j * s, n - 1);
      switch (spec_.kind) {
        case SketchKind::DirectInjection:
          indices_.push_back(centre);
          values_.push_back(1.0);
          break;
        case SketchKind::NearestNeighbor: {
          const auto first = static_cast<Index>(indices_.size());
          double in_range = 0.0;
          for (Index t = -spec_.d; t <= spec_.d; ++t) {
            const Index i = centre + t;
            const double w = spec_.weights[static_cast<std::size_t>(t + spec_.d)];
            if (i < 0 || i >= n || w == 0.0) continue;
            indices_.push_back(i);
            values_.push_back(w);
            in_range += w;
          }
          if (in_range <= 0.0) throw ConfigError("sketch: stencil has no in-range weight at the boundary");
          for (auto t = static_cast<std::size_t>(first); t < values_.size(); ++t) values_[t] /= in_range;
          break;
        }
        case SketchKind::GlobalAverage: {
          Index start = j * s;
          Index stop = std::min((j + 1) * s, n);
          if (start >= n) {
            start = n - 1;
            stop = n;
          }
          const double w = 1.0 / static_cast<double>(stop - start);
          for (Index i = start; i < stop; ++i) {
            indices_.push_back(i);
            values_.push_back(w);
          }
          break;
        }
        case SketchKind::GaussianDense: break;
      }
      offsets_.push_back(static_cast<Index>(indices_.size()));
    }
  }

  if (spec_.ell) omega_ = gaussian_matrix(nc, *spec_.ell, spec_.seed, kProjectionStream);
}

RowBlock SketchOperator::apply_coarse(const Eigen::Ref<const RowBlock>& block) const {
  if (block.cols() != spec_.n) {
    throw ConfigError("sketch: block width " + std::to_string(block.cols()) +
                      " does not match fine dimension " + std::to_string(spec_.n));
  }
  if (spec_.kind == SketchKind::GaussianDense) return block * dense_;

  const Index nc = spec_.n_c;
  RowBlock out(block.rows(), nc);
  for (Index r = 0; r < block.rows(); ++r) {
    const double* row = block.row(r).data();
    for (Index j = 0; j < nc; ++j) {
      double acc = 0.0;
      for (Index t = offsets_[static_cast<std::size_t>(j)]; t < offsets_[static_cast<std::size_t>(j + 1)]; ++t) {
        acc += values_[static_cast<std::size_t>(t)] * row[indices_[static_cast<std::size_t>(t)]];
      }
      out(r, j) = acc;
    }
  }
  return out;
}

RowBlock SketchOperator::project(const Eigen::Ref<const RowBlock>& coarse) const {
  if (coarse.cols() != spec_.n_c) throw ConfigError("sketch: coarse block width mismatch");
  if (!has_projection()) return coarse;
  return coarse * omega_;
}

RowBlock SketchOperator::apply(const Eigen::Ref<const RowBlock>& block) const {
  RowBlock coarse = apply_coarse(block);
  if (!has_projection()) return coarse;
  return coarse * omega_;
}

Index SketchOperator::stencil_size(Index j) const {
  if (j < 0 || j >= spec_.n_c) throw ConfigError("sketch: coarse column out of range");
  if (spec_.kind == SketchKind::GaussianDense) return spec_.n;
  return offsets_[static_cast<std::size_t>(j + 1)] - offsets_[static_cast<std::size_t>(j)];
}

SketchOperator SketchOperator::coarse_only() const {
  SketchSpec spec = spec_;
  spec.ell.reset();
  return SketchOperator(std::move(spec));
}

SketchOperator build_sketch(const SketchSpec& spec) { return SketchOperator(spec); }

RowBlock apply_sketch(const SketchOperator& op, const Eigen::Ref<const RowBlock>& block) {
  return op.apply(block);
}

SketchOperator compose_gaussian(const SketchOperator& op, Index ell, std::uint64_t seed) {
  SketchSpec spec = op.spec();
  spec.ell = ell;
  spec.seed = seed;
  return SketchOperator(std::move(spec));
}

RowBlock gather_columns(const Eigen::Ref<const RowBlock>& block, std::span<const Index> idx) {
  std::unordered_set<Index> seen;
  for (Index i : idx) {
    if (i < 0 || i >= block.cols()) {
      throw ConfigError("gather: column index " + std::to_string(i) + " outside [0, " +
                        std::to_string(block.cols()) + ")");
    }
    if (!seen.insert(i).second) throw ConfigError("gather: duplicate column index " + std::to_string(i));
  }
  RowBlock out(block.rows(), static_cast<Index>(idx.size()));
  for (Index r = 0; r < block.rows(); ++r) {
    for (std::size_t t = 0; t < idx.size(); ++t) out(r, static_cast<Index>(t)) = block(r, idx[t]);
  }
  return out;
}

Matrix explicit_matrix(const SketchOperator& op) {
  const auto& spec = op.spec();
  Matrix d = Matrix::Zero(spec.n, spec.n_c);
  if (spec.kind == SketchKind::GaussianDense) {
    d = gaussian_matrix(spec.n, spec.n_c, spec.seed, kDenseStream);
  } else {
    // Push each unit row through the operator: column i of D^T.
    RowBlock unit = RowBlock::Zero(1, spec.n);
    for (Index i = 0; i < spec.n; ++i) {
      unit(0, i) = 1.0;
      d.row(i) = op.apply_coarse(unit).row(0);
      unit(0, i) = 0.0;
    }
  }
  if (op.has_projection()) return d * op.projection();
  return d;
}

IndexList strided_columns(Index n, Index stride) {
  if (stride < 1) throw ConfigError("column stride must be >= 1");
  IndexList out;
  for (Index i = 0; i < n; i += stride) out.push_back(i);
  return out;
}

}  // namespace sketchpress
