#include <gtest/gtest.h>

#include <sketchpress/analysis.hpp>
#include <sketchpress/datagen.hpp>
#include <sketchpress/error.hpp>
#include <sketchpress/linalg.hpp>
#include <sketchpress/power_iter.hpp>

#include "oracles.hpp"

#include <cmath>

using namespace sketchpress;

namespace {

SketchOperator di(Index n, Index nc) {
  SketchSpec s;
  s.n = n;
  s.n_c = nc;
  return SketchOperator(s);
}

double projector_gap(const Matrix& a, const Matrix& b) {
  return oracle::spectral_norm(a * a.transpose() - b * b.transpose());
}

}  // namespace

TEST(PowerIter, SpectrumRaisedToOddPower) {
  SpectrumSpec spec{.m = 12, .n = 12, .decay = DecayKind::Exponential, .rate = 0.3, .seed = 4};
  const Matrix a = gen_spectrum_matrix(spec);
  const Vector s = spec.singular_values();
  for (Index q = 0; q <= 2; ++q) {
    PowerConfig cfg;
    cfg.q = q;
    const RangeBasis b = cpwr_range(a, a, cfg);
    const Vector got = oracle::jacobi_singular_values(b.G);
    for (Index i = 0; i < s.size(); ++i) {
      EXPECT_NEAR(got[i], std::pow(s[i], 2.0 * static_cast<double>(q) + 1.0), 1e-12) << "q=" << q;
    }
  }
}

TEST(PowerIter, ProjectorInvariantUnderColumnScaling) {
  std::mt19937_64 rng(1);
  const Matrix a = oracle::random_matrix(30, 60, rng);
  const Matrix c = a(Eigen::all, Eigen::seq(0, 59, 3));
  const Matrix s0 = a(Eigen::all, Eigen::seq(1, 59, 6));
  PowerConfig cfg;
  for (double tau : {0.01, 0.7, 42.0}) {
    const RangeBasis base = cpwr_range(c, s0, cfg);
    const RangeBasis scaled = cpwr_range(std::sqrt(tau) * c, s0, cfg);
    EXPECT_LE(projector_gap(base.Qb, scaled.Qb), 1e-10) << tau;
  }
}

TEST(PowerIter, ZeroPowerIsBaseline) {
  std::mt19937_64 rng(2);
  const Matrix c = oracle::random_matrix(20, 8, rng);
  const Matrix s0 = oracle::random_matrix(20, 4, rng);
  PowerConfig cfg;
  cfg.q = 0;
  const RangeBasis b = cpwr_range(c, s0, cfg);
  EXPECT_EQ(b.Qb, b.Qnp);
  EXPECT_LE(projector_gap(b.Qb, oracle::range_basis(s0)), 1e-12);
}

TEST(PowerIter, QbOrthonormal) {
  std::mt19937_64 rng(3);
  const Matrix c = oracle::random_matrix(40, 10, rng);
  const Matrix s0 = oracle::random_matrix(40, 6, rng);
  PowerConfig cfg;
  cfg.q = 2;
  const RangeBasis b = cpwr_range(c, s0, cfg);
  EXPECT_LE((b.Qb.transpose() * b.Qb - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(PowerIter, ReorthMatchesDirectSubspace) {
  std::mt19937_64 rng(4);
  const Matrix c = oracle::random_matrix(40, 12, rng);
  const Matrix s0 = oracle::random_matrix(40, 5, rng);
  PowerConfig direct;
  direct.q = 2;
  PowerConfig reorth = direct;
  reorth.reorth = true;
  const Matrix a = cpwr_range(c, s0, direct).Qb;
  const Matrix b = cpwr_range(c, s0, reorth).Qb;
  // Largest principal angle between the two subspaces.
  const Vector cosines = oracle::jacobi_singular_values(a.transpose() * b);
  EXPECT_LE(std::acos(std::min(1.0, cosines.minCoeff())), 1e-6);
}

TEST(PowerIter, SingleAndTwoPassFinalizeAgree) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const Matrix a = oracle::random_matrix(35, 80, rng);
    const SketchOperator op = di(80, 8);
    PowerConfig one;
    one.q = 1 + t % 2;
    PowerConfig two = one;
    two.mode = FinalizeMode::TwoPass;
    SnapshotStream s1 = SnapshotStream::from_matrix(a);
    SnapshotStream s2 = SnapshotStream::from_matrix(a);
    const Matrix x = spc_svd_pwr(s1, op, 4, one).reconstruct();
    const Matrix y = spc_svd_pwr(s2, op, 4, two).reconstruct();
    EXPECT_LE((x - y).norm(), 1e-8 * y.norm());
    EXPECT_EQ(s1.passes_completed(), 1u);
    EXPECT_EQ(s2.passes_completed(), 2u);
  }
}

TEST(PowerIter, RepeatedSketchColumnsKeepFinalizersConsistent) {
  // n = 152, n_c = 35: the last DI centres clamp onto column 151, so S0 and G
  // carry repeated columns.
  std::mt19937_64 rng(9);
  const Matrix a = oracle::random_matrix(39, 152, rng);
  const SketchOperator op = di(152, 35);
  PowerConfig one;
  one.column_stride = 3;
  PowerConfig two = one;
  two.mode = FinalizeMode::TwoPass;
  const Matrix s0 = a * oracle::sketch_matrix(op.spec());
  const RangeBasis b = cpwr_range(a(Eigen::all, one.resolve_columns(152)), s0, one);
  EXPECT_LT(b.Qb.cols(), 35);
  EXPECT_LE((b.Qb * b.Rb - b.G).norm(), 1e-12 * b.G.norm());
  SnapshotStream s1 = SnapshotStream::from_matrix(a);
  SnapshotStream s2 = SnapshotStream::from_matrix(a);
  const Matrix x = spc_svd_pwr(s1, op, 5, one).reconstruct();
  const Matrix y = spc_svd_pwr(s2, op, 5, two).reconstruct();
  EXPECT_LE((x - y).norm(), 1e-8 * y.norm());
}

TEST(PowerIter, SinglePassWithReorthRejected) {
  PowerConfig cfg;
  cfg.reorth = true;
  SnapshotStream s = SnapshotStream::from_matrix(Matrix::Ones(20, 40));
  EXPECT_THROW(spc_svd_pwr(s, di(40, 5), 2, cfg), ConfigError);
  const Matrix c = Matrix::Ones(4, 3);
  EXPECT_THROW(finalize_svd_single_pass(RangeBasis{}, c, c, c, cfg, 1), ConfigError);
}

TEST(PowerIter, ColumnSetMustExceedRank) {
  PowerConfig cfg;
  cfg.columns = {0, 1, 2};
  SnapshotStream s = SnapshotStream::from_matrix(Matrix::Ones(20, 40));
  EXPECT_THROW(spc_svd_pwr(s, di(40, 3), 3, cfg), ConfigError);
  EXPECT_EQ(s.cursor(), 0);
}

TEST(PowerIter, ExactLowRankNotDegraded) {
  std::mt19937_64 rng(6);
  const Matrix a = oracle::random_low_rank(50, 200, 4, rng);
  const SketchOperator op = di(200, 20);
  for (FinalizeMode mode : {FinalizeMode::SinglePass, FinalizeMode::TwoPass}) {
    PowerConfig cfg;
    cfg.mode = mode;
    SnapshotStream s = SnapshotStream::from_matrix(a);
    EXPECT_LE(rel_frob_error(a, spc_svd_pwr(s, op, 4, cfg).reconstruct()), 1e-8);
    SnapshotStream t = SnapshotStream::from_matrix(a);
    SpcIdOptions opt;
    opt.r = 4;
    EXPECT_LE(rel_frob_error(a, spc_id_pwr(t, op, 4, opt, cfg).reconstruct()), 1e-8);
    EXPECT_EQ(t.passes_completed(), mode == FinalizeMode::SinglePass ? 1u : 2u);
  }
}

TEST(PowerIter, ImprovesSlowDecayOnAverage) {
  SpectrumSpec spec{.m = 80, .n = 400, .decay = DecayKind::Power, .alpha = 0.5, .seed = 3};
  const Matrix a = gen_spectrum_matrix(spec);
  const double oracle_err = oracle_error(a, 1);
  std::vector<double> with, without;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SketchOperator op = compose_gaussian(di(400, 40), 2, seed);
    SnapshotStream s0 = SnapshotStream::from_matrix(a);
    without.push_back(rel_frob_error(a, spc_svd(s0, op, 1).reconstruct()));
    SnapshotStream s1 = SnapshotStream::from_matrix(a);
    PowerConfig cfg;
    with.push_back(rel_frob_error(a, spc_svd_pwr(s1, op, 1, cfg).reconstruct()));
  }
  EXPECT_LT(mreo(with, oracle_err).ratio, mreo(without, oracle_err).ratio);
}
