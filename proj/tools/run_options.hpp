#pragma once

#include <sketchpress/algorithm.hpp>
#include <sketchpress/codec.hpp>
#include <sketchpress/datagen.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace sketchpress::cli {

/// Flags shared by compress, estimate-error and bench.
struct RunOptions {
  std::string input;
  std::string output;
  std::string algorithm = "spc-svd";
  std::string sketch = "di";  // base kind, optionally "+gauss"
  double coarsen = 10.0;
  Index nn_width = 1;
  Index rank = 4;
  Index oversample = 10;
  std::optional<Index> lift_rank;
  Index power = 0;
  bool reorth = false;
  Index stride = 10;
  std::string id_target = "coarse";
  std::uint64_t seed = 0;
  std::string codec = "lossless";
  int bits = 20;
  bool deflate = false;
  Index block_rows = kDefaultBlockRows;
  bool verify = false;
};

/// Sketch spec for width n from --sketch, --coarsen, --nn-width and --seed.
/// A "+gauss" suffix composes a Gaussian projection of width k + oversample.
SketchSpec make_sketch_spec(const RunOptions& opt, Index n, Index k);

AlgorithmConfig make_algorithm_config(const RunOptions& opt, Index n);

FactorCodecParams make_codec(const RunOptions& opt);

struct GenOptions {
  std::string kind = "spectrum";
  std::string output;
  Index m = 100;
  Index n = 1000;
  std::string decay = "power";
  double rate = 0.5;
  double alpha = 0.5;
  Index rank = 4;
  Index grid = 32;
  Index steps = 64;
  double diffusivity = 0.01;
  double dt = 1.0;
  Index modes = 6;
  std::uint64_t seed = 0;
  bool f32 = false;
};

}  // namespace sketchpress::cli
