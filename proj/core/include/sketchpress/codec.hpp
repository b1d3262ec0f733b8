#pragma once

#include <sketchpress/types.hpp>

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace sketchpress {

enum class CodecMode : std::uint8_t { Lossless = 0, FixedPoint = 1 };
enum class LosslessStage : std::uint8_t { None = 0, Deflate = 1 };

std::string_view to_string(CodecMode mode);
CodecMode parse_codec_mode(std::string_view name);

struct FactorCodecParams {
  CodecMode mode = CodecMode::Lossless;
  int bits = 20;  // magnitude bits per entry, FixedPoint only
  LosslessStage stage = LosslessStage::None;

  /// Throws ConfigError unless 1 <= bits <= 52 in FixedPoint mode.
  void validate() const;
  bool operator==(const FactorCodecParams&) const = default;
};

struct EncodedFactor {
  FactorCodecParams params;
  Index rows = 0;
  Index cols = 0;
  double epsilon = 0.0;  // ||decode(blob) - M||_2
  std::vector<std::uint8_t> blob;
};

/// Lossless: raw little-endian doubles. FixedPoint: entries scaled by the
/// largest magnitude, rounded to `bits` magnitude bits plus a sign bit and
/// bit-packed; the blob starts with the f64 scale. Either may then be passed
/// through deflate. Entries are stored row after row.
EncodedFactor encode_factor(const Eigen::Ref<const Matrix>& m, const FactorCodecParams& params);

/// Inverse of encode_factor. Throws FormatError on a malformed blob.
Matrix decode_factor(std::span<const std::uint8_t> blob, Index rows, Index cols, const FactorCodecParams& params);

inline Matrix decode_factor(const EncodedFactor& f) { return decode_factor(f.blob, f.rows, f.cols, f.params); }

}  // namespace sketchpress
