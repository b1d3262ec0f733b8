#include <sketchpress/codec.hpp>

#include <sketchpress/error.hpp>
#include <sketchpress/linalg.hpp>

#include "bytes.hpp"

#include <zlib.h>

#include <cmath>
#include <string>

namespace sketchpress {

namespace {

std::vector<std::uint8_t> deflate_bytes(const std::vector<std::uint8_t>& raw) {
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> packed(bound);
  if (compress2(packed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), Z_BEST_COMPRESSION) != Z_OK) {
    throw IoError("deflate failed");
  }
  packed.resize(bound);
  detail::ByteWriter w;
  w.put<std::uint64_t>(raw.size());
  w.put_bytes(packed);
  return w.take();
}

std::vector<std::uint8_t> inflate_bytes(std::span<const std::uint8_t> blob) {
  detail::ByteReader r(blob);
  const auto size = r.get<std::uint64_t>();
  if (size > (std::uint64_t{1} << 40)) throw FormatError("implausible inflated size");
  auto body = r.get_bytes(r.remaining());
  std::vector<std::uint8_t> raw(size);
  uLongf out_len = static_cast<uLongf>(size);
  if (uncompress(raw.data(), &out_len, body.data(), static_cast<uLong>(body.size())) != Z_OK || out_len != size) {
    throw FormatError("corrupt deflate stream in factor blob");
  }
  return raw;
}

class BitWriter {
 public:
  void put(std::uint64_t value, int width) {
    acc_ |= value << fill_;
    fill_ += width;
    while (fill_ >= 8) {
      out_.push_back(static_cast<std::uint8_t>(acc_ & 0xffu));
      acc_ >>= 8;
      fill_ -= 8;
    }
  }
  std::vector<std::uint8_t> finish() {
    if (fill_ > 0) out_.push_back(static_cast<std::uint8_t>(acc_ & 0xffu));
    acc_ = 0;
    fill_ = 0;
    return std::move(out_);
  }

 private:
  std::uint64_t acc_ = 0;
  int fill_ = 0;
  std::vector<std::uint8_t> out_;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> data) : data_(data) {}
  std::uint64_t get(int width) {
    while (fill_ < width) {
      if (pos_ >= data_.size()) throw FormatError("fixed-point payload is truncated");
      acc_ |= static_cast<std::uint64_t>(data_[pos_++]) << fill_;
      fill_ += 8;
    }
    const std::uint64_t value = acc_ & ((std::uint64_t{1} << width) - 1);
    acc_ >>= width;
    fill_ -= width;
    return value;
  }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  std::uint64_t acc_ = 0;
  int fill_ = 0;
};

double levels(int bits) { return std::ldexp(1.0, bits) - 1.0; }

}  // namespace

std::string_view to_string(CodecMode mode) { return mode == CodecMode::Lossless ? "lossless" : "fixed"; }

CodecMode parse_codec_mode(std::string_view name) {
  if (name == "lossless") return CodecMode::Lossless;
  if (name == "fixed" || name == "fixed-point") return CodecMode::FixedPoint;
  throw ConfigError("unknown codec '" + std::string(name) + "' (expected lossless or fixed)");
}

void FactorCodecParams::validate() const {
  if (mode == CodecMode::FixedPoint && (bits < 1 || bits > 52)) {
    throw ConfigError("codec: fixed-point bits must lie in [1, 52] (got " + std::to_string(bits) + ")");
  }
  if (mode != CodecMode::Lossless && mode != CodecMode::FixedPoint) throw ConfigError("codec: unknown mode");
  if (stage != LosslessStage::None && stage != LosslessStage::Deflate) throw ConfigError("codec: unknown stage");
}

EncodedFactor encode_factor(const Eigen::Ref<const Matrix>& m, const FactorCodecParams& params) {
  params.validate();
  require_finite(m, "encode_factor");

  std::vector<std::uint8_t> raw;
  if (params.mode == CodecMode::Lossless) {
    detail::ByteWriter w;
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) w.put<double>(m(i, j));
    }
    raw = w.take();
  } else {
    const double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
    const double top = levels(params.bits);
    detail::ByteWriter w;
    w.put<double>(scale);
    BitWriter bits;
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        const double x = m(i, j);
        std::uint64_t mag = 0;
        if (scale > 0.0) mag = static_cast<std::uint64_t>(std::min(top, std::nearbyint(std::abs(x) / scale * top)));
        const std::uint64_t sign = (x < 0.0 && mag != 0) ? 1 : 0;
        bits.put(mag | (sign << params.bits), params.bits + 1);
      }
    }
    w.put_bytes(bits.finish());
    raw = w.take();
  }

  EncodedFactor out;
  out.params = params;
  out.rows = m.rows();
  out.cols = m.cols();
  out.blob = params.stage == LosslessStage::Deflate ? deflate_bytes(raw) : std::move(raw);
  const Matrix decoded = decode_factor(out);
  out.epsilon = spectral_norm(decoded - m);
  return out;
}

Matrix decode_factor(std::span<const std::uint8_t> blob, Index rows, Index cols, const FactorCodecParams& params) {
  params.validate();
  if (rows < 0 || cols < 0) throw FormatError("negative factor dimensions");
  std::vector<std::uint8_t> inflated;
  std::span<const std::uint8_t> raw = blob;
  if (params.stage == LosslessStage::Deflate) {
    inflated = inflate_bytes(blob);
    raw = inflated;
  }

  Matrix out(rows, cols);
  const auto count = static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(cols);
  if (params.mode == CodecMode::Lossless) {
    if (raw.size() != count * sizeof(double)) throw FormatError("lossless factor blob has the wrong length");
    detail::ByteReader r(raw);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) out(i, j) = r.get<double>();
    }
    return out;
  }

  const auto width = static_cast<std::uint64_t>(params.bits + 1);
  const std::uint64_t payload = (count * width + 7) / 8;
  if (raw.size() != sizeof(double) + payload) throw FormatError("fixed-point factor blob has the wrong length");
  detail::ByteReader r(raw);
  const double scale = r.get<double>();
  if (!(scale >= 0.0) || !std::isfinite(scale)) throw FormatError("fixed-point scale is invalid");
  BitReader bits(r.get_bytes(r.remaining()));
  const double top = levels(params.bits);
  const std::uint64_t mask = (std::uint64_t{1} << params.bits) - 1;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const std::uint64_t v = bits.get(params.bits + 1);
      const double mag = static_cast<double>(v & mask) / top * scale;
      out(i, j) = (v >> params.bits) ? -mag : mag;
    }
  }
  return out;
}

}  // namespace sketchpress
