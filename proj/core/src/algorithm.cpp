#include <sketchpress/algorithm.hpp>

#include <sketchpress/error.hpp>

#include <string>

namespace sketchpress {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::SpcSvd: return "spc-svd";
    case Algorithm::TpcSvd: return "tpc-svd";
    case Algorithm::SpcId: return "spc-id";
    case Algorithm::TpcId: return "tpc-id";
    case Algorithm::ProtoTpc: return "proto-tpc";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::SpcSvd, Algorithm::TpcSvd, Algorithm::SpcId, Algorithm::TpcId, Algorithm::ProtoTpc}) {
    if (name == to_string(a)) return a;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (expected spc-svd, tpc-svd, spc-id, tpc-id or proto-tpc)");
}

bool is_single_pass(Algorithm algorithm) {
  return algorithm == Algorithm::SpcSvd || algorithm == Algorithm::SpcId;
}

bool is_svd(Algorithm algorithm) {
  return algorithm == Algorithm::SpcSvd || algorithm == Algorithm::TpcSvd || algorithm == Algorithm::ProtoTpc;
}

void AlgorithmConfig::validate() const {
  sketch.validate();
  const Index width = sketch.ell.value_or(sketch.n_c);
  if (k < 1) throw ConfigError("rank k must be >= 1");
  if (k > width) {
    throw ConfigError("rank k=" + std::to_string(k) + " exceeds the sketch width " + std::to_string(width) +
                      " (k must satisfy k <= n_c)");
  }
  if (r && *r < k) throw ConfigError("lifting rank r=" + std::to_string(*r) + " must be >= k=" + std::to_string(k));
  if (r && (algorithm != Algorithm::SpcId)) throw ConfigError("lifting rank r only applies to spc-id");
  if (q < 0) throw ConfigError("power count q must be >= 0");
  if (q > 0 && algorithm == Algorithm::ProtoTpc) throw ConfigError("proto-tpc does not support power iteration");
  if (reorth && q == 0) throw ConfigError("--reorth needs q >= 1");
  if (reorth && algorithm == Algorithm::SpcSvd) {
    throw ConfigError("reorthonormalisation breaks the single-pass spc-svd finalize; use tpc-svd");
  }
  if (column_stride < 1) throw ConfigError("column stride must be >= 1");
  if (block_rows < 1) throw ConfigError("block height must be >= 1");
}

Index AlgorithmConfig::expected_passes() const { return is_single_pass(algorithm) ? 1 : 2; }

PowerConfig AlgorithmConfig::power() const {
  PowerConfig cfg;
  cfg.q = q;
  cfg.column_stride = column_stride;
  cfg.reorth = reorth;
  cfg.mode = is_single_pass(algorithm) ? FinalizeMode::SinglePass : FinalizeMode::TwoPass;
  return cfg;
}

}  // namespace sketchpress
