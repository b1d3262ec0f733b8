#include "run_options.hpp"

#include <sketchpress/error.hpp>

namespace sketchpress::cli {

SketchSpec make_sketch_spec(const RunOptions& opt, Index n, Index k) {
  std::string base = opt.sketch;
  bool gauss = false;
  if (const auto plus = base.find('+'); plus != std::string::npos) {
    const std::string suffix = base.substr(plus + 1);
    if (suffix != "gauss" && suffix != "gaussian") {
      throw ConfigError("unknown sketch suffix '+" + suffix + "' (only +gauss is supported)");
    }
    base = base.substr(0, plus);
    gauss = true;
  }
  SketchSpec spec = sketch_spec_for_coarsening(parse_sketch_kind(base), n, opt.coarsen);
  spec.seed = opt.seed;
  if (spec.kind == SketchKind::NearestNeighbor) {
    spec.d = opt.nn_width;
    spec.weights = default_neighbor_weights(opt.nn_width);
  }
  if (gauss) {
    if (spec.kind == SketchKind::GaussianDense) throw ConfigError("gaussian+gauss is not a meaningful sketch");
    if (opt.oversample < 0) throw ConfigError("--oversample must be >= 0");
    spec.ell = k + opt.oversample;
  }
  spec.validate();
  return spec;
}

AlgorithmConfig make_algorithm_config(const RunOptions& opt, Index n) {
  AlgorithmConfig cfg;
  cfg.algorithm = parse_algorithm(opt.algorithm);
  cfg.k = opt.rank;
  if (cfg.k < 1) throw ConfigError("--rank must be >= 1");
  cfg.sketch = make_sketch_spec(opt, n, opt.rank);
  cfg.r = opt.lift_rank;
  cfg.q = opt.power;
  cfg.reorth = opt.reorth;
  cfg.column_stride = opt.stride;
  cfg.id_target = parse_id_target(opt.id_target);
  cfg.block_rows = opt.block_rows;
  cfg.validate();
  return cfg;
}

FactorCodecParams make_codec(const RunOptions& opt) {
  FactorCodecParams p;
  p.mode = parse_codec_mode(opt.codec);
  p.bits = opt.bits;
  p.stage = opt.deflate ? LosslessStage::Deflate : LosslessStage::None;
  p.validate();
  return p;
}

}  // namespace sketchpress::cli
