#include <gtest/gtest.h>

#include <sketchpress/error.hpp>
#include <sketchpress/sketch.hpp>

#include "oracles.hpp"

using namespace sketchpress;

namespace {

SketchSpec make_spec(SketchKind kind, Index n, Index nc, Index d = 1) {
  SketchSpec s;
  s.kind = kind;
  s.n = n;
  s.n_c = nc;
  s.d = d;
  if (kind == SketchKind::NearestNeighbor) s.weights = default_neighbor_weights(d);
  return s;
}

RowBlock row(std::initializer_list<double> v) {
  RowBlock r(1, static_cast<Index>(v.size()));
  Index j = 0;
  for (double x : v) r(0, j++) = x;
  return r;
}

}  // namespace

TEST(Sketch, DirectInjectionPicksStrideColumns) {
  const SketchOperator op(make_spec(SketchKind::DirectInjection, 4, 2));
  const RowBlock out = apply_sketch(op, row({1, 2, 3, 4}));
  EXPECT_EQ(out, row({1, 3}));
  const Matrix d = explicit_matrix(op);
  EXPECT_EQ((d.array() != 0.0).count(), 2);
  EXPECT_EQ(d.sum(), 2.0);
}

TEST(Sketch, DirectInjectionStencilIsOne) {
  const SketchOperator op(make_spec(SketchKind::DirectInjection, 10, 2));
  for (Index j = 0; j < 2; ++j) EXPECT_EQ(op.stencil_size(j), 1);
}

TEST(Sketch, NeighborStencilWidth) {
  const SketchOperator op(make_spec(SketchKind::NearestNeighbor, 30, 5, 1));
  for (Index j = 1; j < 5; ++j) EXPECT_EQ(op.stencil_size(j), 3);
  EXPECT_EQ(op.stencil_size(0), 2);  // left boundary drops one tap
}

TEST(Sketch, DefaultNeighborWeightsAreQuarterHalfQuarter) {
  const auto w = default_neighbor_weights(1);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_DOUBLE_EQ(w[0], 0.25);
  EXPECT_DOUBLE_EQ(w[1], 0.5);
  EXPECT_DOUBLE_EQ(w[2], 0.25);
}

TEST(Sketch, NeighborBoundaryRenormalises) {
  const SketchOperator op(make_spec(SketchKind::NearestNeighbor, 6, 2, 1));
  const RowBlock out = apply_sketch(op, row({0, 1, 0, 0, 0, 0}));
  EXPECT_NEAR(out(0, 0), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(out(0, 1), 0.0);
}

TEST(Sketch, IdentityWhenNcEqualsN) {
  const SketchOperator op(make_spec(SketchKind::DirectInjection, 7, 7));
  EXPECT_EQ(explicit_matrix(op), Matrix::Identity(7, 7));
}

TEST(Sketch, GlobalAverageColumnsSumToOne) {
  const SketchOperator op(make_spec(SketchKind::GlobalAverage, 11, 4));
  const Matrix d = explicit_matrix(op);
  for (Index j = 0; j < 4; ++j) EXPECT_NEAR(d.col(j).sum(), 1.0, 1e-15);
  EXPECT_LE(op.stencil_size(3), op.spec().subsample_factor());
}

TEST(Sketch, ConstantRowPreserved) {
  for (SketchKind kind : {SketchKind::DirectInjection, SketchKind::NearestNeighbor, SketchKind::GlobalAverage}) {
    const SketchOperator op(make_spec(kind, 23, 6, 2));
    const RowBlock out = op.apply(RowBlock::Constant(1, 23, 3.5));
    EXPECT_LE((out.array() - 3.5).abs().maxCoeff(), 1e-12) << to_string(kind);
  }
}

TEST(Sketch, MatchesIndependentOracleOnRandomConfigs) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> kind_pick(0, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = std::uniform_int_distribution<Index>(1, 60)(rng);
    const Index nc = std::uniform_int_distribution<Index>(1, n)(rng);
    const Index d = std::uniform_int_distribution<Index>(0, 3)(rng);
    const auto kind = static_cast<SketchKind>(kind_pick(rng));
    const SketchSpec spec = make_spec(kind, n, nc, d);
    const SketchOperator op(spec);
    const Matrix ref = oracle::sketch_matrix(spec);
    const RowBlock x = oracle::random_matrix(3, n, rng);
    const RowBlock got = op.apply(x);
    const Matrix want = Matrix(x) * ref;
    EXPECT_LE((Matrix(got) - want).cwiseAbs().maxCoeff(), 1e-12 * x.cwiseAbs().maxCoeff())
        << to_string(kind) << " n=" << n << " n_c=" << nc << " d=" << d;
    EXPECT_LE((explicit_matrix(op) - ref).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Sketch, Linear) {
  std::mt19937_64 rng(5);
  for (SketchKind kind : {SketchKind::DirectInjection, SketchKind::NearestNeighbor, SketchKind::GlobalAverage,
                          SketchKind::GaussianDense}) {
    const SketchOperator op(make_spec(kind, 40, 9));
    const RowBlock x = oracle::random_matrix(1, 40, rng);
    const RowBlock y = oracle::random_matrix(1, 40, rng);
    const RowBlock lhs = op.apply(RowBlock(2.5 * x - 0.75 * y));
    const RowBlock rhs = 2.5 * op.apply(x) - 0.75 * op.apply(y);
    EXPECT_LE((lhs - rhs).norm(), 1e-12 * rhs.norm());
  }
}

TEST(Sketch, RejectsBadSpecs) {
  EXPECT_THROW(SketchOperator(make_spec(SketchKind::DirectInjection, 4, 5)), ConfigError);
  EXPECT_THROW(SketchOperator(make_spec(SketchKind::DirectInjection, 4, 0)), ConfigError);
  SketchSpec neg = make_spec(SketchKind::NearestNeighbor, 10, 3);
  neg.weights = {-0.5, 1.0, 0.5};
  EXPECT_THROW(SketchOperator{neg}, ConfigError);
  SketchSpec sum = make_spec(SketchKind::NearestNeighbor, 10, 3);
  sum.weights = {0.5, 0.5, 0.5};
  EXPECT_THROW(SketchOperator{sum}, ConfigError);
}

TEST(Sketch, WidthMismatchRejected) {
  const SketchOperator op(make_spec(SketchKind::DirectInjection, 10, 5));
  EXPECT_THROW(op.apply(RowBlock::Zero(1, 9)), ConfigError);
}

TEST(Sketch, GaussianCompositionBounds) {
  const SketchOperator base(make_spec(SketchKind::DirectInjection, 20, 6));
  EXPECT_NO_THROW(compose_gaussian(base, 5, 1));
  EXPECT_THROW(compose_gaussian(base, 6, 1), ConfigError);
  EXPECT_THROW(compose_gaussian(base, 0, 1), ConfigError);
}

TEST(Sketch, GaussianCompositionDeterministicAndLinear) {
  const SketchOperator base(make_spec(SketchKind::GlobalAverage, 20, 6));
  const SketchOperator a = compose_gaussian(base, 3, 42);
  const SketchOperator b = compose_gaussian(base, 3, 42);
  EXPECT_EQ(a.projection(), b.projection());
  EXPECT_EQ(a.output_dim(), 3);
  EXPECT_EQ(a.apply(RowBlock::Zero(2, 20)), RowBlock::Zero(2, 3));
  std::mt19937_64 rng(1);
  const RowBlock x = oracle::random_matrix(2, 20, rng);
  const Matrix want = Matrix(x) * oracle::sketch_matrix(base.spec()) * a.projection();
  EXPECT_LE((Matrix(a.apply(x)) - want).norm(), 1e-12 * want.norm());
  EXPECT_LE((explicit_matrix(a) - oracle::sketch_matrix(base.spec()) * a.projection()).norm(), 1e-12);
  EXPECT_EQ(a.coarse_only().output_dim(), 6);
}

TEST(Sketch, GatherColumns) {
  const RowBlock r = row({7, 8, 9});
  const IndexList all{0, 1, 2};
  EXPECT_EQ(gather_columns(r, all), r);
  const IndexList first{0};
  EXPECT_EQ(gather_columns(r, first), row({7}));
  const IndexList bad{1, 3};
  EXPECT_THROW(gather_columns(r, bad), ConfigError);
  const IndexList dup{1, 1};
  EXPECT_THROW(gather_columns(r, dup), ConfigError);
}

TEST(Sketch, StridedColumnsAndParsing) {
  EXPECT_EQ(strided_columns(25, 10), (IndexList{0, 10, 20}));
  EXPECT_EQ(parse_sketch_kind("di"), SketchKind::DirectInjection);
  EXPECT_EQ(parse_sketch_kind("nn"), SketchKind::NearestNeighbor);
  EXPECT_EQ(parse_sketch_kind("ga"), SketchKind::GlobalAverage);
  EXPECT_EQ(parse_sketch_kind("gaussian"), SketchKind::GaussianDense);
  EXPECT_THROW(parse_sketch_kind("foo"), ConfigError);
}

TEST(Sketch, CoarseningFactorToNc) {
  const SketchSpec s = sketch_spec_for_coarsening(SketchKind::DirectInjection, 1000, 10.0);
  EXPECT_EQ(s.n_c, 100);
  EXPECT_EQ(s.subsample_factor(), 10);
}
