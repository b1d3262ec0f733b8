#include <gtest/gtest.h>

#include <sketchpress/analysis.hpp>
#include <sketchpress/bounds.hpp>
#include <sketchpress/error.hpp>
#include <sketchpress/linalg.hpp>
#include <sketchpress/row_id.hpp>

#include "oracles.hpp"

using namespace sketchpress;

namespace {

SketchOperator sketch_of(SketchKind kind, Index n, Index nc) {
  SketchSpec s;
  s.kind = kind;
  s.n = n;
  s.n_c = nc;
  if (kind == SketchKind::NearestNeighbor) s.weights = default_neighbor_weights(1);
  return SketchOperator(s);
}

}  // namespace

TEST(RowId, HandWorkedTwoByTwo) {
  Matrix m(2, 2);
  m << 1, 2, 2, 4;
  const RowIDFactors f = row_id(m, 1);
  ASSERT_EQ(f.I.size(), 1u);
  EXPECT_EQ(f.I[0], 1);
  EXPECT_NEAR(f.P(0, 0), 0.5, 1e-15);
  EXPECT_EQ(f.P(1, 0), 1.0);
  EXPECT_LE((f.reconstruct() - m).norm(), 1e-15);
}

TEST(RowId, InterpolationRowsAreIdentity) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const Matrix m = oracle::random_matrix(15, 8, rng);
    const Index k = 1 + t % 6;
    const RowIDFactors f = row_id(m, k);
    for (Index j = 0; j < k; ++j) {
      EXPECT_EQ(f.P.row(f.I[static_cast<std::size_t>(j)]), Matrix::Identity(k, k).row(j));
    }
    EXPECT_LE((f.reconstruct() - m).norm(), row_id_bound(m, k) * (1 + 1e-12) + 1e-14);
  }
}

TEST(RowId, FullRankExact) {
  std::mt19937_64 rng(6);
  const Matrix m = oracle::random_low_rank(20, 12, 5, rng);
  EXPECT_LE(rel_frob_error(m, row_id(m, 5).reconstruct()), 1e-10);
}

TEST(RowId, DistinctIndices) {
  std::mt19937_64 rng(7);
  const Matrix m = oracle::random_matrix(30, 10, rng);
  const RowIDFactors f = row_id(m, 8);
  IndexList sorted = f.I;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::unique(sorted.begin(), sorted.end()), sorted.end());
}

TEST(RowId, TpcIdIdentitySketchMatchesDirectId) {
  std::mt19937_64 rng(8);
  const Matrix a = oracle::random_matrix(18, 9, rng);
  SnapshotStream s = SnapshotStream::from_matrix(a);
  const RowIDFactors viaStream = tpc_id(s, sketch_of(SketchKind::DirectInjection, 9, 9), 4, 5);
  const RowIDFactors direct = row_id(a, 4);
  EXPECT_EQ(viaStream.I, direct.I);
  EXPECT_EQ(viaStream.P, direct.P);
  EXPECT_EQ(viaStream.skeleton, direct.skeleton);
  EXPECT_EQ(s.passes_completed(), 2u);
}

TEST(RowId, TpcIdExactRank) {
  std::mt19937_64 rng(9);
  const Matrix a = oracle::random_low_rank(50, 200, 4, rng);
  SnapshotStream s = SnapshotStream::from_matrix(a);
  const RowIDFactors f = tpc_id(s, sketch_of(SketchKind::GlobalAverage, 200, 20), 4);
  EXPECT_LE(rel_frob_error(a, f.reconstruct()), 1e-8);
  EXPECT_EQ(f.skeleton, a(f.I, Eigen::all));
}

TEST(RowId, LiftingReproducesRangeOfCoarse) {
  std::mt19937_64 rng(10);
  const Matrix ac = oracle::random_matrix(30, 8, rng);
  const Matrix m = oracle::random_matrix(8, 40, rng);
  const Matrix af = ac * m;
  const ThinSVD svd = thin_svd(ac);
  const LiftingOperator lift = build_lifting(svd, af.transpose() * ac, 8);
  EXPECT_EQ(lift.r, 8);
  EXPECT_LE((ac * lift.T - af).norm(), 1e-8 * af.norm());
  EXPECT_LE((lift.T - oracle::lstsq(ac, af)).norm(), 1e-8 * lift.T.norm());
}

TEST(RowId, LiftingClampsToRank) {
  std::mt19937_64 rng(11);
  const Matrix ac = oracle::random_low_rank(20, 6, 3, rng);
  const LiftingOperator lift = build_lifting(thin_svd(ac), Matrix::Zero(10, 6), 5);
  EXPECT_EQ(lift.r, 3);
  EXPECT_FALSE(lift.warnings.empty());
}

TEST(RowId, SquareInvertibleLifting) {
  std::mt19937_64 rng(12);
  const Matrix af = oracle::random_low_rank(4, 12, 4, rng);
  const SketchOperator op = sketch_of(SketchKind::DirectInjection, 12, 4);
  SnapshotStream s = SnapshotStream::from_matrix(af);
  SpcIdOptions opt;
  opt.r = 4;
  const RowIDFactors f = spc_id(s, op, 4, opt);
  EXPECT_LE((f.reconstruct() - af).norm(), 1e-8 * af.norm());
}

TEST(RowId, SpcIdExactRankSinglePass) {
  std::mt19937_64 rng(13);
  for (SketchKind kind : {SketchKind::DirectInjection, SketchKind::NearestNeighbor, SketchKind::GlobalAverage}) {
    const Matrix a = oracle::random_low_rank(60, 150, 5, rng);
    SnapshotStream s = SnapshotStream::from_matrix(a);
    SpcIdOptions opt;
    opt.r = 5;
    const RowIDFactors f = spc_id(s, sketch_of(kind, 150, 15), 5, opt);
    EXPECT_LE(rel_frob_error(a, f.reconstruct()), 1e-8) << to_string(kind);
    EXPECT_EQ(s.passes_completed(), 1u);
    EXPECT_EQ(f.skeleton.cols(), 15);
    ASSERT_TRUE(f.lifting.has_value());
    EXPECT_EQ(f.lifting->rows(), 15);
    EXPECT_EQ(f.lifting->cols(), 150);
  }
}

TEST(RowId, SpcIdLeadingBasisTarget) {
  std::mt19937_64 rng(14);
  const Matrix a = oracle::random_low_rank(60, 150, 3, rng);
  SnapshotStream s = SnapshotStream::from_matrix(a);
  SpcIdOptions opt;
  opt.target = IdTarget::LeadingBasis;
  const RowIDFactors f = spc_id(s, sketch_of(SketchKind::DirectInjection, 150, 15), 3, opt);
  EXPECT_LE(rel_frob_error(a, f.reconstruct()), 1e-8);
}

TEST(RowId, DefaultLiftRankIsTwiceK) {
  std::mt19937_64 rng(15);
  const Matrix a = oracle::random_matrix(40, 100, rng);
  SnapshotStream s = SnapshotStream::from_matrix(a);
  const RowIDFactors f = spc_id(s, sketch_of(SketchKind::DirectInjection, 100, 20), 3);
  EXPECT_EQ(f.r, 6);
}

TEST(RowId, LiftRankBelowKRejected) {
  SnapshotStream s = SnapshotStream::from_matrix(Matrix::Ones(10, 20));
  SpcIdOptions opt;
  opt.r = 2;
  EXPECT_THROW(spc_id(s, sketch_of(SketchKind::DirectInjection, 20, 10), 3, opt), ConfigError);
  EXPECT_EQ(s.cursor(), 0);
}

TEST(RowId, ParseTarget) {
  EXPECT_EQ(parse_id_target("coarse"), IdTarget::Coarse);
  EXPECT_EQ(parse_id_target("leading-basis"), IdTarget::LeadingBasis);
  EXPECT_THROW(parse_id_target("x"), ConfigError);
}
