#pragma once

#include <sketchpress/algorithm.hpp>
#include <sketchpress/archive.hpp>
#include <sketchpress/codec.hpp>
#include <sketchpress/snapshot_io.hpp>

#include <string>
#include <vector>

namespace sketchpress {

/// Two-factor form A ~= B C of any configured algorithm.
struct Factorization {
  Matrix B;  // m x k
  Matrix C;  // k x n
  std::vector<std::string> warnings;
};

/// Runs the configured algorithm on the stream. SVD algorithms give
/// B = U_k, C = S_k V_k^T; ID algorithms give B = P and C = skeleton (T_r).
Factorization factorize(SnapshotStream& stream, const AlgorithmConfig& config);

struct CompressOutcome {
  Archive archive;
  std::size_t passes = 0;  // data passes made by the algorithm
  std::vector<std::string> warnings;
};

/// factorize followed by encoding both factors with `codec`.
CompressOutcome compress_dataset(SnapshotStream& stream, const AlgorithmConfig& config,
                                 const FactorCodecParams& codec);

}  // namespace sketchpress
