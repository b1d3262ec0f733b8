#include <sketchpress/archive.hpp>

#include <sketchpress/error.hpp>

#include "bytes.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <iterator>

namespace sketchpress {

namespace {

class RecordWriter {
 public:
  explicit RecordWriter(detail::ByteWriter& out) : out_(out) {}

  template <typename T>
  void scalar(ArchiveTag tag, T value) {
    detail::ByteWriter payload;
    payload.put<T>(value);
    record(tag, payload.bytes());
  }

  void doubles(ArchiveTag tag, const std::vector<double>& values) {
    detail::ByteWriter payload;
    for (double v : values) payload.put<double>(v);
    record(tag, payload.bytes());
  }

  std::uint16_t count() const { return count_; }

 private:
  void record(ArchiveTag tag, const std::vector<std::uint8_t>& payload) {
    out_.put<std::uint16_t>(static_cast<std::uint16_t>(tag));
    out_.put<std::uint32_t>(static_cast<std::uint32_t>(payload.size()));
    out_.put_bytes(payload);
    ++count_;
  }

  detail::ByteWriter& out_;
  std::uint16_t count_ = 0;
};

template <typename T>
T payload_scalar(std::span<const std::uint8_t> payload, ArchiveTag tag) {
  if (payload.size() != sizeof(T)) {
    throw FormatError("archive record " + std::to_string(static_cast<int>(tag)) + " has the wrong length");
  }
  detail::ByteReader r(payload);
  return r.get<T>();
}

Index as_index(std::uint64_t v, const char* what) {
  if (v > static_cast<std::uint64_t>(std::numeric_limits<Index>::max())) {
    throw FormatError(std::string("archive field ") + what + " is out of range");
  }
  return static_cast<Index>(v);
}

template <typename E>
E as_enum(std::uint8_t v, std::uint8_t max, const char* what) {
  if (v > max) throw FormatError(std::string("archive field ") + what + " has an unknown value");
  return static_cast<E>(v);
}

}  // namespace

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t done = 0;
  while (done < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - done, 1u << 30));
    crc = crc32(crc, bytes.data() + done, chunk);
    done += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::uint64_t Archive::compressed_bytes() const {
  std::uint64_t total = 0;
  for (const auto& f : factors) total += f.blob.size();
  return total;
}

void Archive::check_shapes() const {
  if (factors.size() != 2) throw FormatError("archive must hold exactly two factors");
  const auto& b = B();
  const auto& c = C();
  if (b.rows != m || c.cols != n) throw FormatError("factor shapes do not match the archived matrix size");
  if (b.cols != c.rows) throw FormatError("inner factor dimensions disagree");
  if (b.cols != config.k) throw FormatError("factor rank does not match the archived k");
}

std::vector<std::uint8_t> serialize_archive(const Archive& archive) {
  archive.check_shapes();
  detail::ByteWriter header;
  header.put_chars(kArchiveMagic.data(), kArchiveMagic.size());
  header.put<std::uint16_t>(kArchiveVersion);

  detail::ByteWriter body;
  RecordWriter rec(body);
  const auto& cfg = archive.config;
  rec.scalar<std::uint8_t>(ArchiveTag::Algorithm, static_cast<std::uint8_t>(cfg.algorithm));
  rec.scalar<std::uint8_t>(ArchiveTag::SketchKind, static_cast<std::uint8_t>(cfg.sketch.kind));
  rec.scalar<std::uint64_t>(ArchiveTag::FineDim, static_cast<std::uint64_t>(cfg.sketch.n));
  rec.scalar<std::uint64_t>(ArchiveTag::CoarseDim, static_cast<std::uint64_t>(cfg.sketch.n_c));
  rec.scalar<std::uint64_t>(ArchiveTag::HalfWidth, static_cast<std::uint64_t>(cfg.sketch.d));
  rec.doubles(ArchiveTag::Weights, cfg.sketch.weights);
  rec.scalar<std::uint64_t>(ArchiveTag::Seed, cfg.sketch.seed);
  if (cfg.sketch.ell) rec.scalar<std::uint64_t>(ArchiveTag::Projection, static_cast<std::uint64_t>(*cfg.sketch.ell));
  rec.scalar<std::uint64_t>(ArchiveTag::Rank, static_cast<std::uint64_t>(cfg.k));
  if (cfg.r) rec.scalar<std::uint64_t>(ArchiveTag::LiftRank, static_cast<std::uint64_t>(*cfg.r));
  rec.scalar<std::uint64_t>(ArchiveTag::Power, static_cast<std::uint64_t>(cfg.q));
  rec.scalar<std::uint8_t>(ArchiveTag::Reorth, cfg.reorth ? 1 : 0);
  rec.scalar<std::uint64_t>(ArchiveTag::Rows, static_cast<std::uint64_t>(archive.m));
  rec.scalar<std::uint64_t>(ArchiveTag::OriginalBytes, archive.original_bytes);
  rec.scalar<std::uint64_t>(ArchiveTag::ColumnStride, static_cast<std::uint64_t>(cfg.column_stride));
  rec.scalar<std::uint8_t>(ArchiveTag::IdTarget, static_cast<std::uint8_t>(cfg.id_target));
  rec.scalar<std::uint8_t>(ArchiveTag::Finalize, static_cast<std::uint8_t>(cfg.power().mode));
  rec.scalar<std::uint8_t>(ArchiveTag::ScalarKind, static_cast<std::uint8_t>(archive.scalar_kind));
  rec.scalar<std::uint64_t>(ArchiveTag::BlockRows, static_cast<std::uint64_t>(cfg.block_rows));
  header.put<std::uint16_t>(rec.count());
  header.put_bytes(body.bytes());

  header.put<std::uint32_t>(static_cast<std::uint32_t>(archive.factors.size()));
  for (const auto& f : archive.factors) {
    header.put<std::uint8_t>(static_cast<std::uint8_t>(f.params.mode));
    header.put<std::uint8_t>(static_cast<std::uint8_t>(f.params.bits));
    header.put<std::uint8_t>(static_cast<std::uint8_t>(f.params.stage));
    header.put<std::uint8_t>(0);
    header.put<std::uint64_t>(static_cast<std::uint64_t>(f.rows));
    header.put<std::uint64_t>(static_cast<std::uint64_t>(f.cols));
    header.put<double>(f.epsilon);
    header.put<std::uint64_t>(f.blob.size());
    header.put<std::uint32_t>(crc32_of(f.blob));
    header.put_bytes(f.blob);
  }
  return header.take();
}

Archive parse_archive(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  const auto magic = r.get_bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kArchiveMagic.begin(),
                  [](std::uint8_t a, char b) { return a == static_cast<std::uint8_t>(b); })) {
    throw FormatError("not an archive (magic mismatch)");
  }
  const auto version = r.get<std::uint16_t>();
  if (version != kArchiveVersion) throw FormatError("unsupported archive version " + std::to_string(version));

  Archive a;
  auto& cfg = a.config;
  bool have_n = false, have_m = false, have_k = false;
  const auto records = r.get<std::uint16_t>();
  for (std::uint16_t i = 0; i < records; ++i) {
    const auto tag = static_cast<ArchiveTag>(r.get<std::uint16_t>());
    const auto len = r.get<std::uint32_t>();
    const auto payload = r.get_bytes(len);
    switch (tag) {
      case ArchiveTag::Algorithm:
        cfg.algorithm = as_enum<Algorithm>(payload_scalar<std::uint8_t>(payload, tag), 4, "algorithm");
        break;
      case ArchiveTag::SketchKind:
        cfg.sketch.kind = as_enum<SketchKind>(payload_scalar<std::uint8_t>(payload, tag), 3, "sketch kind");
        break;
      case ArchiveTag::FineDim:
        cfg.sketch.n = as_index(payload_scalar<std::uint64_t>(payload, tag), "n");
        a.n = cfg.sketch.n;
        have_n = true;
        break;
      case ArchiveTag::CoarseDim: cfg.sketch.n_c = as_index(payload_scalar<std::uint64_t>(payload, tag), "n_c"); break;
      case ArchiveTag::HalfWidth: cfg.sketch.d = as_index(payload_scalar<std::uint64_t>(payload, tag), "d"); break;
      case ArchiveTag::Weights: {
        if (payload.size() % sizeof(double) != 0) throw FormatError("archive weights record is malformed");
        detail::ByteReader w(payload);
        cfg.sketch.weights.clear();
        while (w.remaining() > 0) cfg.sketch.weights.push_back(w.get<double>());
        break;
      }
      case ArchiveTag::Seed: cfg.sketch.seed = payload_scalar<std::uint64_t>(payload, tag); break;
      case ArchiveTag::Projection: cfg.sketch.ell = as_index(payload_scalar<std::uint64_t>(payload, tag), "ell"); break;
      case ArchiveTag::Rank:
        cfg.k = as_index(payload_scalar<std::uint64_t>(payload, tag), "k");
        have_k = true;
        break;
      case ArchiveTag::LiftRank: cfg.r = as_index(payload_scalar<std::uint64_t>(payload, tag), "r"); break;
      case ArchiveTag::Power: cfg.q = as_index(payload_scalar<std::uint64_t>(payload, tag), "q"); break;
      case ArchiveTag::Reorth: cfg.reorth = payload_scalar<std::uint8_t>(payload, tag) != 0; break;
      case ArchiveTag::Rows:
        a.m = as_index(payload_scalar<std::uint64_t>(payload, tag), "m");
        have_m = true;
        break;
      case ArchiveTag::OriginalBytes: a.original_bytes = payload_scalar<std::uint64_t>(payload, tag); break;
      case ArchiveTag::ColumnStride:
        cfg.column_stride = as_index(payload_scalar<std::uint64_t>(payload, tag), "column stride");
        break;
      case ArchiveTag::IdTarget:
        cfg.id_target = as_enum<IdTarget>(payload_scalar<std::uint8_t>(payload, tag), 1, "id target");
        break;
      case ArchiveTag::Finalize: break;  // implied by the algorithm
      case ArchiveTag::ScalarKind:
        a.scalar_kind = as_enum<ScalarKind>(payload_scalar<std::uint8_t>(payload, tag), 1, "scalar kind");
        break;
      case ArchiveTag::BlockRows:
        cfg.block_rows = as_index(payload_scalar<std::uint64_t>(payload, tag), "block rows");
        break;
      default: break;
    }
  }
  if (!have_n || !have_m || !have_k) throw FormatError("archive is missing its shape records");

  const auto count = r.get<std::uint32_t>();
  if (count != 2) throw FormatError("archive must hold exactly two factors");
  for (std::uint32_t i = 0; i < count; ++i) {
    EncodedFactor f;
    f.params.mode = as_enum<CodecMode>(r.get<std::uint8_t>(), 1, "codec mode");
    f.params.bits = r.get<std::uint8_t>();
    f.params.stage = as_enum<LosslessStage>(r.get<std::uint8_t>(), 1, "lossless stage");
    r.get<std::uint8_t>();
    f.rows = as_index(r.get<std::uint64_t>(), "factor rows");
    f.cols = as_index(r.get<std::uint64_t>(), "factor cols");
    f.epsilon = r.get<double>();
    const auto len = r.get<std::uint64_t>();
    const auto crc = r.get<std::uint32_t>();
    if (len > r.remaining()) throw FormatError("factor blob is truncated");
    const auto blob = r.get_bytes(static_cast<std::size_t>(len));
    if (crc32_of(blob) != crc) throw FormatError("factor " + std::to_string(i) + " failed its CRC-32 integrity check");
    f.blob.assign(blob.begin(), blob.end());
    a.factors.push_back(std::move(f));
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after the last factor");
  a.check_shapes();
  return a;
}

void write_archive(const std::filesystem::path& path, const Archive& archive) {
  const auto bytes = serialize_archive(archive);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("write failure on " + path.string());
}

Archive read_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path.string());
  return parse_archive(bytes);
}

void decompress(const Archive& archive, Index block_rows,
                const std::function<void(const RowBlock& block, Index first_row)>& sink) {
  if (block_rows < 1) throw ConfigError("block height must be at least 1");
  archive.check_shapes();
  const Matrix b = decode_factor(archive.B());
  const Matrix c = decode_factor(archive.C());
  for (Index first = 0; first < archive.m; first += block_rows) {
    const Index count = std::min(block_rows, archive.m - first);
    const RowBlock block = b.middleRows(first, count) * c;
    sink(block, first);
  }
}

void decompress_to_file(const Archive& archive, const std::filesystem::path& path, Index block_rows) {
  SnapshotWriter writer(path, archive.n, archive.scalar_kind);
  decompress(archive, block_rows, [&](const RowBlock& block, Index) { writer.append(block); });
  writer.finish();
}

double spatio_temporal_cf(const Archive& archive) {
  const auto stored = archive.compressed_bytes();
  if (stored == 0) throw ConfigError("archive holds no factor bytes");
  return static_cast<double>(archive.original_bytes) / static_cast<double>(stored);
}

double temporal_cf(Index m, Index n, Index k) {
  if (m < 1 || n < 1 || k < 1) throw ConfigError("temporal_cf: dimensions must be positive");
  return static_cast<double>(m) * static_cast<double>(n) /
         (static_cast<double>(k) * (static_cast<double>(m) + static_cast<double>(n)));
}

}  // namespace sketchpress
