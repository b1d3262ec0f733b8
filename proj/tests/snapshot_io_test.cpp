#include <gtest/gtest.h>

#include <sketchpress/snapshot_io.hpp>

#include "oracles.hpp"

#include <fstream>

using namespace sketchpress;

namespace {

RowBlock small_matrix(Index m, Index n) {
  RowBlock a(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = static_cast<double>(i * n + j) + 0.25;
  return a;
}

}  // namespace

TEST(SnapshotIo, HeaderEchoesShape) {
  oracle::TempDir dir("io");
  write_snapshot_file(dir / "a.lrsm", small_matrix(2, 3));
  SnapshotStream s = SnapshotStream::open(dir / "a.lrsm");
  EXPECT_EQ(s.rows(), 2);
  EXPECT_EQ(s.cols(), 3);
  EXPECT_EQ(s.header().scalar_kind, ScalarKind::f64);
  EXPECT_EQ(std::filesystem::file_size(dir / "a.lrsm"), SnapshotHeader::kEncodedSize + 2 * 3 * 8);
}

TEST(SnapshotIo, RoundTripF64IsExact) {
  oracle::TempDir dir("io");
  std::mt19937_64 rng(3);
  const RowBlock a = oracle::random_matrix(7, 5, rng);
  write_snapshot_file(dir / "a.lrsm", a);
  EXPECT_EQ(read_snapshot_file(dir / "a.lrsm"), a);
}

TEST(SnapshotIo, RoundTripF32RoundsEntries) {
  oracle::TempDir dir("io");
  std::mt19937_64 rng(4);
  const RowBlock a = oracle::random_matrix(4, 6, rng);
  write_snapshot_file(dir / "a.lrsm", a, ScalarKind::f32);
  const RowBlock b = read_snapshot_file(dir / "a.lrsm");
  EXPECT_EQ(read_snapshot_header(dir / "a.lrsm").scalar_kind, ScalarKind::f32);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) EXPECT_EQ(b(i, j), static_cast<double>(static_cast<float>(a(i, j))));
}

TEST(SnapshotIo, TruncatedPayloadIsFormatError) {
  oracle::TempDir dir("io");
  write_snapshot_file(dir / "a.lrsm", small_matrix(2, 3));
  std::filesystem::resize_file(dir / "a.lrsm", SnapshotHeader::kEncodedSize + 40);
  EXPECT_THROW(SnapshotStream::open(dir / "a.lrsm"), FormatError);
}

TEST(SnapshotIo, MagicMismatchIsFormatError) {
  oracle::TempDir dir("io");
  write_snapshot_file(dir / "a.lrsm", small_matrix(2, 3));
  {
    std::fstream f(dir / "a.lrsm", std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXX", 4);
  }
  EXPECT_THROW(SnapshotStream::open(dir / "a.lrsm"), FormatError);
}

TEST(SnapshotIo, MissingFileIsIoError) {
  oracle::TempDir dir("io");
  EXPECT_THROW(SnapshotStream::open(dir / "nope.lrsm"), IoError);
}

TEST(SnapshotIo, ShortMatrixComesBackInOneBlock) {
  SnapshotStream s = SnapshotStream::from_matrix(small_matrix(2, 3));
  auto b = s.next_block(5);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->rows(), 2);
  EXPECT_TRUE(s.at_end_of_pass());
  EXPECT_FALSE(s.next_block(5).has_value());
  EXPECT_EQ(s.passes_completed(), 1u);
}

TEST(SnapshotIo, TwoTraversalsCountTwoPasses) {
  oracle::TempDir dir("io");
  const RowBlock a = small_matrix(5, 4);
  write_snapshot_file(dir / "a.lrsm", a);
  SnapshotStream s = SnapshotStream::open(dir / "a.lrsm");
  for (int pass = 0; pass < 2; ++pass) {
    RowBlock seen(5, 4);
    for_each_block(s, 2, [&](const RowBlock& blk, Index first) { seen.middleRows(first, blk.rows()) = blk; });
    EXPECT_EQ(seen, a);
  }
  EXPECT_EQ(s.passes_completed(), 2u);
}

TEST(SnapshotIo, RewindRules) {
  SnapshotStream fresh = SnapshotStream::from_matrix(small_matrix(5, 2));
  EXPECT_THROW(fresh.rewind(), ConfigError);

  SnapshotStream mid = SnapshotStream::from_matrix(small_matrix(5, 2));
  mid.next_block(1);
  EXPECT_THROW(mid.rewind(), ConfigError);

  SnapshotStream full = SnapshotStream::from_matrix(small_matrix(5, 2));
  while (full.next_block(3)) {
  }
  full.rewind();
  while (full.next_block(3)) {
  }
  EXPECT_EQ(full.passes_completed(), 2u);
}

TEST(SnapshotIo, ForEachBlockRejectsMidPass) {
  SnapshotStream s = SnapshotStream::from_matrix(small_matrix(5, 2));
  s.next_block(2);
  EXPECT_THROW(for_each_block(s, 2, [](const RowBlock&, Index) {}), ConfigError);
}

TEST(SnapshotIo, ReadFailurePoisonsStream) {
  oracle::TempDir dir("io");
  write_snapshot_file(dir / "a.lrsm", small_matrix(6, 3));
  SnapshotStream s = SnapshotStream::open(dir / "a.lrsm");
  std::filesystem::resize_file(dir / "a.lrsm", SnapshotHeader::kEncodedSize + 3 * 8);
  EXPECT_NO_THROW(s.next_block(1));
  EXPECT_THROW(s.next_block(4), IoError);
  EXPECT_TRUE(s.poisoned());
  EXPECT_THROW(s.next_block(1), IoError);
  EXPECT_THROW(s.rewind(), IoError);
}

TEST(SnapshotIo, WriterAppendsInChunks) {
  oracle::TempDir dir("io");
  const RowBlock a = small_matrix(7, 3);
  {
    SnapshotWriter w(dir / "a.lrsm", 3);
    w.append(a.topRows(4));
    w.append(a.bottomRows(3));
    w.finish();
    EXPECT_EQ(w.rows_written(), 7);
  }
  EXPECT_EQ(read_snapshot_file(dir / "a.lrsm"), a);
}

TEST(SnapshotIo, WriterRejectsWrongWidth) {
  oracle::TempDir dir("io");
  SnapshotWriter w(dir / "a.lrsm", 3);
  EXPECT_THROW(w.append(small_matrix(1, 4)), ConfigError);
}
