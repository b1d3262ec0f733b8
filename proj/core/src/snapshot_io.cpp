#include <sketchpress/snapshot_io.hpp>

#include "bytes.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

namespace sketchpress {

namespace {

std::array<std::uint8_t, SnapshotHeader::kEncodedSize> encode_header(const SnapshotHeader& h) {
  detail::ByteWriter w;
  w.put_chars(kSnapshotMagic.data(), kSnapshotMagic.size());
  w.put<std::uint16_t>(h.version);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(h.scalar_kind));
  w.put<std::uint8_t>(h.row_major ? kRowMajorFlag : 0);
  w.put<std::uint64_t>(h.rows);
  w.put<std::uint64_t>(h.cols);
  std::array<std::uint8_t, SnapshotHeader::kEncodedSize> out{};
  std::copy(w.bytes().begin(), w.bytes().end(), out.begin());
  return out;
}

SnapshotHeader decode_header(std::span<const std::uint8_t> raw) {
  detail::ByteReader r(raw);
  auto magic = r.get_bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kSnapshotMagic.begin(),
                  [](std::uint8_t a, char b) { return a == static_cast<std::uint8_t>(b); })) {
    throw FormatError("not a snapshot file (magic mismatch)");
  }
  SnapshotHeader h;
  h.version = r.get<std::uint16_t>();
  if (h.version != kSnapshotVersion) {
    throw FormatError("unsupported snapshot version " + std::to_string(h.version));
  }
  const auto kind = r.get<std::uint8_t>();
  if (kind > 1) throw FormatError("unknown scalar kind " + std::to_string(kind));
  h.scalar_kind = static_cast<ScalarKind>(kind);
  const auto flags = r.get<std::uint8_t>();
  h.row_major = (flags & kRowMajorFlag) != 0;
  if (!h.row_major) throw FormatError("column-major snapshot files are not supported");
  h.rows = r.get<std::uint64_t>();
  h.cols = r.get<std::uint64_t>();
  if (h.rows < 1 || h.cols < 1) throw FormatError("snapshot dimensions must be positive");
  const auto limit = std::numeric_limits<std::uint64_t>::max() / 8;
  if (h.rows > limit / h.cols) throw FormatError("snapshot dimensions overflow");
  return h;
}

void convert_row(const char* src, double* dst, Index cols, ScalarKind kind) {
  if (kind == ScalarKind::f64) {
    std::memcpy(dst, src, static_cast<std::size_t>(cols) * sizeof(double));
  } else {
    for (Index j = 0; j < cols; ++j) {
      float v;
      std::memcpy(&v, src + j * sizeof(float), sizeof(float));
      dst[j] = static_cast<double>(v);
    }
  }
}

}  // namespace

SnapshotHeader read_snapshot_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::array<std::uint8_t, SnapshotHeader::kEncodedSize> raw{};
  in.read(reinterpret_cast<char*>(raw.data()), raw.size());
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw FormatError("truncated snapshot header in " + path.string());
  }
  return decode_header(raw);
}

SnapshotStream SnapshotStream::open(const std::filesystem::path& path) {
  SnapshotStream s;
  s.header_ = read_snapshot_header(path);
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw IoError("cannot stat " + path.string());
  if (size < SnapshotHeader::kEncodedSize + s.header_.payload_bytes()) {
    throw FormatError("truncated snapshot payload in " + path.string());
  }
  s.file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*s.file_) throw IoError("cannot open " + path.string());
  s.file_->seekg(SnapshotHeader::kEncodedSize);
  return s;
}

SnapshotStream SnapshotStream::from_matrix(RowBlock data) {
  if (data.rows() < 1 || data.cols() < 1) throw ConfigError("snapshot matrix must be non-empty");
  SnapshotStream s;
  s.header_.rows = static_cast<std::uint64_t>(data.rows());
  s.header_.cols = static_cast<std::uint64_t>(data.cols());
  s.memory_ = std::make_shared<const RowBlock>(std::move(data));
  return s;
}

SnapshotStream::SnapshotStream(SnapshotStream&&) noexcept = default;
SnapshotStream& SnapshotStream::operator=(SnapshotStream&&) noexcept = default;
SnapshotStream::~SnapshotStream() = default;

std::optional<RowBlock> SnapshotStream::next_block(Index max_rows) {
  if (poisoned_) throw IoError("snapshot stream is poisoned by an earlier read failure");
  if (max_rows < 1) throw ConfigError("block height must be at least 1");
  if (cursor_ >= rows()) return std::nullopt;

  const Index count = std::min(max_rows, rows() - cursor_);
  RowBlock block(count, cols());
  if (memory_) {
    block = memory_->middleRows(cursor_, count);
  } else {
    const std::size_t row_bytes = static_cast<std::size_t>(cols()) * header_.scalar_size();
    std::vector<char> buffer(row_bytes * static_cast<std::size_t>(count));
    file_->read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    if (file_->gcount() != static_cast<std::streamsize>(buffer.size())) {
      poisoned_ = true;
      throw IoError("read failure at row " + std::to_string(cursor_));
    }
    for (Index i = 0; i < count; ++i) {
      convert_row(buffer.data() + static_cast<std::size_t>(i) * row_bytes, block.row(i).data(),
                  cols(), header_.scalar_kind);
    }
  }
  cursor_ += count;
  if (cursor_ == rows()) ++passes_completed_;
  return block;
}

void SnapshotStream::rewind() {
  if (poisoned_) throw IoError("snapshot stream is poisoned by an earlier read failure");
  if (!at_end_of_pass()) {
    throw ConfigError("rewind rejected: only " + std::to_string(cursor_) + " of " +
                      std::to_string(rows()) + " rows read in the current pass");
  }
  cursor_ = 0;
  if (file_) {
    file_->clear();
    file_->seekg(SnapshotHeader::kEncodedSize);
  }
}

SnapshotWriter::SnapshotWriter(const std::filesystem::path& path, Index cols, ScalarKind kind)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), cols_(cols), kind_(kind) {
  if (cols < 1) throw ConfigError("snapshot column count must be positive");
  if (!out_) throw IoError("cannot create " + path.string());
  SnapshotHeader h;
  h.scalar_kind = kind;
  h.cols = static_cast<std::uint64_t>(cols);
  const auto raw = encode_header(h);
  out_.write(reinterpret_cast<const char*>(raw.data()), raw.size());
}

SnapshotWriter::~SnapshotWriter() {
  if (!finished_) {
    try {
      finish();
    } catch (...) {
    }
  }
}

void SnapshotWriter::append(const Eigen::Ref<const RowBlock>& block) {
  if (finished_) throw ConfigError("snapshot writer already finished");
  if (block.cols() != cols_) throw ConfigError("row width does not match snapshot column count");
  for (Index i = 0; i < block.rows(); ++i) {
    if (kind_ == ScalarKind::f64) {
      out_.write(reinterpret_cast<const char*>(block.row(i).data()),
                 static_cast<std::streamsize>(cols_ * sizeof(double)));
    } else {
      std::vector<float> row(static_cast<std::size_t>(cols_));
      for (Index j = 0; j < cols_; ++j) row[static_cast<std::size_t>(j)] = static_cast<float>(block(i, j));
      out_.write(reinterpret_cast<const char*>(row.data()),
                 static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
  }
  rows_ += block.rows();
  if (!out_) throw IoError("write failure on " + path_.string());
}

void SnapshotWriter::finish() {
  if (finished_) return;
  finished_ = true;
  if (rows_ < 1) throw ConfigError("snapshot file must contain at least one row");
  SnapshotHeader h;
  h.scalar_kind = kind_;
  h.rows = static_cast<std::uint64_t>(rows_);
  h.cols = static_cast<std::uint64_t>(cols_);
  const auto raw = encode_header(h);
  out_.seekp(0);
  out_.write(reinterpret_cast<const char*>(raw.data()), raw.size());
  out_.close();
  if (!out_) throw IoError("write failure on " + path_.string());
}

void write_snapshot_file(const std::filesystem::path& path, const Eigen::Ref<const RowBlock>& data,
                         ScalarKind kind) {
  SnapshotWriter writer(path, data.cols(), kind);
  writer.append(data);
  writer.finish();
}

RowBlock read_snapshot_file(const std::filesystem::path& path) {
  auto stream = SnapshotStream::open(path);
  RowBlock out(stream.rows(), stream.cols());
  Index r = 0;
  while (auto block = stream.next_block(1024)) {
    out.middleRows(r, block->rows()) = *block;
    r += block->rows();
  }
  return out;
}

}  // namespace sketchpress
