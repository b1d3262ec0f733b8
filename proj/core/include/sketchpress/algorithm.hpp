#pragma once

#include <sketchpress/power_iter.hpp>
#include <sketchpress/row_id.hpp>
#include <sketchpress/sketch.hpp>

#include <optional>
#include <string_view>

namespace sketchpress {

enum class Algorithm : std::uint8_t { SpcSvd = 0, TpcSvd = 1, SpcId = 2, TpcId = 3, ProtoTpc = 4 };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

bool is_single_pass(Algorithm algorithm);
bool is_svd(Algorithm algorithm);

/// Everything needed to rerun a compression: stored verbatim in archives.
struct AlgorithmConfig {
  Algorithm algorithm = Algorithm::SpcSvd;
  SketchSpec sketch;
  Index k = 4;
  std::optional<Index> r;  // SPC-ID lifting rank
  Index q = 0;             // power iterations; 0 disables C-PWR
  bool reorth = false;
  Index column_stride = 10;
  IdTarget id_target = IdTarget::Coarse;
  Index block_rows = kDefaultBlockRows;

  /// Throws ConfigError naming the violated constraint.
  void validate() const;

  /// Number of data passes the algorithm makes.
  Index expected_passes() const;

  PowerConfig power() const;

  bool operator==(const AlgorithmConfig&) const = default;
};

}  // namespace sketchpress
