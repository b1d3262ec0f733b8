#pragma once

#include <sketchpress/error.hpp>
#include <sketchpress/sketch.hpp>
#include <sketchpress/snapshot_io.hpp>

#include <string>

namespace sketchpress::detail {

inline void check_stream_matches(const SnapshotStream& stream, const SketchOperator& sketch) {
  if (stream.cols() != sketch.input_dim()) {
    throw ConfigError("sketch fine dimension " + std::to_string(sketch.input_dim()) +
                      " does not match snapshot width " + std::to_string(stream.cols()));
  }
}

inline void check_rank(Index k, Index limit, const char* what) {
  if (k < 1 || k > limit) {
    throw ConfigError(std::string(what) + ": rank k=" + std::to_string(k) + " must lie in [1, " +
                      std::to_string(limit) + "]");
  }
}

struct CoarseAccumulators {
  Matrix coarse;  // A_c, m x w
  Matrix cross;   // H = A_f^T A_c, n x w (empty unless requested)
};

/// One pass: A_c = A_f D row block by row block and, optionally, H += a_f^T a_c.
inline CoarseAccumulators accumulate_coarse(SnapshotStream& stream, const SketchOperator& sketch,
                                            Index block_rows, bool want_cross) {
  check_stream_matches(stream, sketch);
  CoarseAccumulators acc;
  acc.coarse.resize(stream.rows(), sketch.output_dim());
  if (want_cross) acc.cross = Matrix::Zero(stream.cols(), sketch.output_dim());
  for_each_block(stream, block_rows, [&](const RowBlock& block, Index first) {
    const RowBlock coarse = sketch.apply(block);
    acc.coarse.middleRows(first, block.rows()) = coarse;
    if (want_cross) acc.cross.noalias() += block.transpose() * coarse;
  });
  return acc;
}

}  // namespace sketchpress::detail
