#include <sketchpress/compress.hpp>

#include <sketchpress/error.hpp>
#include <sketchpress/power_iter.hpp>
#include <sketchpress/row_id.hpp>
#include <sketchpress/svd_sketch.hpp>

namespace sketchpress {

namespace {

Factorization from_svd(LowRankSVD svd) {
  Factorization f;
  f.B = std::move(svd.U);
  f.C = svd.S.asDiagonal() * svd.V.transpose();
  f.warnings = std::move(svd.warnings);
  return f;
}

Factorization from_id(RowIDFactors id) {
  Factorization f;
  f.C = id.right_factor();
  f.B = std::move(id.P);
  f.warnings = std::move(id.warnings);
  return f;
}

}  // namespace

Factorization factorize(SnapshotStream& stream, const AlgorithmConfig& config) {
  config.validate();
  if (config.sketch.n != stream.cols()) {
    throw ConfigError("sketch fine dimension " + std::to_string(config.sketch.n) +
                      " does not match snapshot width " + std::to_string(stream.cols()));
  }
  const SketchOperator sketch(config.sketch);
  const Index k = config.k;
  const Index rows = config.block_rows;

  if (config.q > 0) {
    const PowerConfig power = config.power();
    if (is_svd(config.algorithm)) return from_svd(spc_svd_pwr(stream, sketch, k, power, rows));
    SpcIdOptions options;
    options.r = config.r;
    options.target = config.id_target;
    return from_id(spc_id_pwr(stream, sketch, k, options, power, rows));
  }

  switch (config.algorithm) {
    case Algorithm::SpcSvd: return from_svd(spc_svd(stream, sketch, k, rows));
    case Algorithm::TpcSvd: return from_svd(tpc_svd(stream, sketch, k, rows));
    case Algorithm::ProtoTpc: return from_svd(proto_tpc(stream, sketch, k, rows));
    case Algorithm::TpcId: return from_id(tpc_id(stream, sketch, k, rows));
    case Algorithm::SpcId: {
      SpcIdOptions options;
      options.r = config.r;
      options.target = config.id_target;
      return from_id(spc_id(stream, sketch, k, options, rows));
    }
  }
  throw ConfigError("unknown algorithm");
}

CompressOutcome compress_dataset(SnapshotStream& stream, const AlgorithmConfig& config,
                                 const FactorCodecParams& codec) {
  codec.validate();
  const std::size_t before = stream.passes_completed();
  Factorization f = factorize(stream, config);

  CompressOutcome out;
  out.passes = stream.passes_completed() - before;
  out.warnings = std::move(f.warnings);
  auto& a = out.archive;
  a.config = config;
  a.m = stream.rows();
  a.n = stream.cols();
  a.scalar_kind = stream.header().scalar_kind;
  a.original_bytes = stream.header().payload_bytes();
  a.factors.push_back(encode_factor(f.B, codec));
  a.factors.push_back(encode_factor(f.C, codec));
  return out;
}

}  // namespace sketchpress
