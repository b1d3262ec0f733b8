#pragma once

#include <sketchpress/algorithm.hpp>
#include <sketchpress/codec.hpp>
#include <sketchpress/snapshot_io.hpp>

#include <array>
#include <filesystem>
#include <functional>
#include <vector>

namespace sketchpress {

inline constexpr std::array<char, 4> kArchiveMagic{'L', 'R', 'S', 'A'};
inline constexpr std::uint16_t kArchiveVersion = 1;

/// Config record tags. Unknown tags are skipped on read.
enum class ArchiveTag : std::uint16_t {
  Algorithm = 1,
  SketchKind = 2,
  FineDim = 3,
  CoarseDim = 4,
  HalfWidth = 5,
  Weights = 6,
  Seed = 7,
  Projection = 8,
  Rank = 9,
  LiftRank = 10,
  Power = 11,
  Reorth = 12,
  Rows = 13,
  OriginalBytes = 14,
  ColumnStride = 15,
  IdTarget = 16,
  Finalize = 17,
  ScalarKind = 18,
  BlockRows = 19,
};

/// A compressed rank-k approximation A ~= B C with B (m x k) and C (k x n).
struct Archive {
  AlgorithmConfig config;
  Index m = 0;
  Index n = 0;
  ScalarKind scalar_kind = ScalarKind::f64;
  std::uint64_t original_bytes = 0;
  std::vector<EncodedFactor> factors;  // {B, C}

  const EncodedFactor& B() const { return factors.at(0); }
  const EncodedFactor& C() const { return factors.at(1); }
  std::uint64_t compressed_bytes() const;

  /// Checks factor shapes against (m, n, k). Throws FormatError.
  void check_shapes() const;
};

/// [magic][u16 version][u16 record count][records: u16 tag, u32 length, payload]
/// [u32 factor count][per factor: u8 mode, u8 bits, u8 stage, u8 reserved,
///  u64 rows, u64 cols, f64 epsilon, u64 byte length, u32 CRC-32, blob]
std::vector<std::uint8_t> serialize_archive(const Archive& archive);

/// Throws FormatError on bad magic, version, truncation, checksum or shape.
Archive parse_archive(std::span<const std::uint8_t> bytes);

void write_archive(const std::filesystem::path& path, const Archive& archive);
Archive read_archive(const std::filesystem::path& path);

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes);

/// Emits reconstructed rows B(rows, :) C block by block, never holding the
/// full m x n product.
void decompress(const Archive& archive, Index block_rows,
                const std::function<void(const RowBlock& block, Index first_row)>& sink);

/// Streams the reconstruction into a snapshot file.
void decompress_to_file(const Archive& archive, const std::filesystem::path& path,
                        Index block_rows = kDefaultBlockRows);

/// original bytes / sum of factor blob bytes.
double spatio_temporal_cf(const Archive& archive);

/// m n / (k (m + n)): the ratio for uncompressed rank-k factors stored at the
/// same precision as the data.
double temporal_cf(Index m, Index n, Index k);

}  // namespace sketchpress
