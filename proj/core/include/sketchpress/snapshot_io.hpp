#pragma once

#include <sketchpress/error.hpp>
#include <sketchpress/types.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>

namespace sketchpress {

enum class ScalarKind : std::uint8_t { f64 = 0, f32 = 1 };

inline constexpr std::array<char, 4> kSnapshotMagic{'L', 'R', 'S', 'M'};
inline constexpr std::uint16_t kSnapshotVersion = 1;
inline constexpr std::uint8_t kRowMajorFlag = 0x01;

/// On-disk layout (little-endian):
///   [magic "LRSM"][u16 version][u8 scalar_kind][u8 flags][u64 m][u64 n][payload]
/// The payload holds m*n scalars, row after row.
struct SnapshotHeader {
  std::uint16_t version = kSnapshotVersion;
  ScalarKind scalar_kind = ScalarKind::f64;
  bool row_major = true;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;

  static constexpr std::size_t kEncodedSize = 24;

  std::size_t scalar_size() const { return scalar_kind == ScalarKind::f64 ? 8 : 4; }
  std::uint64_t payload_bytes() const { return rows * cols * scalar_size(); }
};

/// Streaming, instrumented reader over a snapshot matrix.
///
/// Rows are handed out strictly in order in blocks of caller-chosen height.
/// A pass is counted once all m rows have been delivered; rewinding is only
/// legal at the end of a pass so that pass counts are an honest audit of how
/// many times an algorithm touched the data.
class SnapshotStream {
 public:
  /// Opens and validates a snapshot file. Throws FormatError on a bad magic,
  /// unsupported version or truncated payload, IoError if unreadable.
  static SnapshotStream open(const std::filesystem::path& path);

  /// An in-memory stream with identical pass accounting. Used by tests and
  /// by callers that already hold the data.
  static SnapshotStream from_matrix(RowBlock data);

  SnapshotStream(SnapshotStream&&) noexcept;
  SnapshotStream& operator=(SnapshotStream&&) noexcept;
  ~SnapshotStream();

  const SnapshotHeader& header() const { return header_; }
  Index rows() const { return static_cast<Index>(header_.rows); }
  Index cols() const { return static_cast<Index>(header_.cols); }

  /// Returns up to `max_rows` rows, or nullopt once the pass is exhausted.
  /// The pass counter advances when the final row of a pass is delivered.
  std::optional<RowBlock> next_block(Index max_rows);

  /// Repositions at row 0. Throws ConfigError unless a full pass has just
  /// been completed.
  void rewind();

  Index cursor() const { return cursor_; }
  Index rows_read_this_pass() const { return cursor_; }
  std::size_t passes_completed() const { return passes_completed_; }
  bool at_end_of_pass() const { return cursor_ == rows(); }
  bool poisoned() const { return poisoned_; }

 private:
  SnapshotStream() = default;

  SnapshotHeader header_;
  std::unique_ptr<std::ifstream> file_;
  std::shared_ptr<const RowBlock> memory_;
  Index cursor_ = 0;
  std::size_t passes_completed_ = 0;
  bool poisoned_ = false;
};

inline constexpr Index kDefaultBlockRows = 64;

/// Runs one full pass over `stream`, invoking fn(block, first_row) for every
/// block. A stream sitting at the end of a previous pass is rewound first; a
/// stream stopped mid-pass is rejected.
template <typename Fn>
void for_each_block(SnapshotStream& stream, Index block_rows, Fn&& fn) {
  if (block_rows < 1) throw ConfigError("block height must be at least 1");
  if (stream.at_end_of_pass() && stream.passes_completed() > 0) stream.rewind();
  if (stream.cursor() != 0) throw ConfigError("stream is positioned mid-pass");
  Index first = 0;
  while (auto block = stream.next_block(block_rows)) {
    fn(static_cast<const RowBlock&>(*block), first);
    first += block->rows();
  }
}

/// Incremental writer; the row count is patched into the header on finish().
class SnapshotWriter {
 public:
  SnapshotWriter(const std::filesystem::path& path, Index cols,
                 ScalarKind kind = ScalarKind::f64);
  SnapshotWriter(const SnapshotWriter&) = delete;
  SnapshotWriter& operator=(const SnapshotWriter&) = delete;
  ~SnapshotWriter();

  void append(const Eigen::Ref<const RowBlock>& block);
  void finish();

  Index rows_written() const { return rows_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  Index cols_;
  Index rows_ = 0;
  ScalarKind kind_;
  bool finished_ = false;
};

void write_snapshot_file(const std::filesystem::path& path, const Eigen::Ref<const RowBlock>& data,
                         ScalarKind kind = ScalarKind::f64);

/// Reads a whole file into memory without touching any stream accounting.
RowBlock read_snapshot_file(const std::filesystem::path& path);

SnapshotHeader read_snapshot_header(const std::filesystem::path& path);

}  // namespace sketchpress
